// pipeline/recipe.cc

// Copyright 2026  asrlab authors

// See ../../COPYING for clarification regarding multiple authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#include "pipeline/recipe.h"

#include <fstream>
#include <sstream>

#include "base/asr-error.h"
#include "decoder/context-graph.h"
#include "feat/wave.h"
#include "hmm/baum-welch.h"
#include "hmm/cart.h"
#include "lm/ngram-counts.h"

namespace asrlab {

namespace {

WindowType ParseWindow(const std::string &s) {
  if (s == "hamming") return WindowType::kHamming;
  if (s == "hann") return WindowType::kHann;
  if (s == "rect") return WindowType::kRect;
  ThrowError(ErrorCode::kFormatError, "unknown window '", s, "'");
}

const char *WindowName(WindowType w) {
  switch (w) {
    case WindowType::kHann: return "hann";
    case WindowType::kRect: return "rect";
    default: return "hamming";
  }
}

std::vector<TrainingUtterance> MakeTrainingSet(const FeatureSet &feats,
                                               const Transcripts &transcripts,
                                               const Lexicon &lexicon,
                                               const AcousticModel &model) {
  std::vector<TrainingUtterance> corpus;
  for (const auto &[id, words] : transcripts) {
    auto it = feats.find(id);
    if (it == feats.end()) ThrowError(ErrorCode::kIdMismatch, "no features for '", id, "'");
    corpus.push_back({id, it->second, ExpandTranscript(words, lexicon, model)});
  }
  return corpus;
}

DecodeConfig DecodeConfigFromKv(const KvConfig &kv, DecodeConfig c) {
  c.am_scale = kv.GetDouble("am_scale", c.am_scale);
  c.lm_scale = kv.GetDouble("lm_scale", c.lm_scale);
  c.beam_logwidth = kv.GetDouble("beam", c.beam_logwidth);
  c.max_active = static_cast<int>(kv.GetInt("max_active", c.max_active));
  c.Validate();
  return c;
}

KvConfig DecodeConfigToKv(const DecodeConfig &c) {
  KvConfig kv;
  kv.Set("am_scale", c.am_scale);
  kv.Set("lm_scale", c.lm_scale);
  kv.Set("beam", c.beam_logwidth);
  kv.Set("max_active", c.max_active);
  return kv;
}

}  // namespace

MfccConfig MfccConfigFromKv(const KvConfig &kv) {
  MfccConfig c;
  c.preemph_coeff = kv.GetDouble("preemph", c.preemph_coeff);
  c.frame_len_ms = kv.GetDouble("frame_len_ms", c.frame_len_ms);
  c.frame_shift_ms = kv.GetDouble("frame_shift_ms", c.frame_shift_ms);
  c.n_fft = kv.GetInt("n_fft", 256);
  c.n_mel_filters = kv.GetInt("mel_filters", 23);
  c.n_ceps = kv.GetInt("ceps", c.n_ceps);
  c.add_deltas = kv.GetBool("deltas", c.add_deltas);
  c.fmin_hz = kv.GetDouble("fmin_hz", c.fmin_hz);
  c.fmax_hz = kv.GetDouble("fmax_hz", c.fmax_hz);
  c.window = ParseWindow(kv.GetString("window", "hamming"));
  return c;
}

KvConfig MfccConfigToKv(const MfccConfig &c) {
  KvConfig kv;
  kv.Set("preemph", c.preemph_coeff);
  kv.Set("frame_len_ms", c.frame_len_ms);
  kv.Set("frame_shift_ms", c.frame_shift_ms);
  kv.Set("n_fft", static_cast<long>(c.n_fft));
  kv.Set("mel_filters", static_cast<long>(c.n_mel_filters));
  kv.Set("ceps", static_cast<long>(c.n_ceps));
  kv.Set("deltas", c.add_deltas);
  kv.Set("fmin_hz", c.fmin_hz);
  kv.Set("fmax_hz", c.fmax_hz);
  kv.Set("window", WindowName(c.window));
  return kv;
}

FeatureMatrix ComputeFeatures(const ManifestEntry &entry, const MfccConfig &cfg) {
  if (!entry.audio.empty()) {
    AudioSegment seg = ReadWave(entry.audio);
    seg.id = entry.id;
    return Mfcc(seg, cfg);
  }
  if (entry.features.empty())
    ThrowError(ErrorCode::kFormatError, "entry '", entry.id, "' has no audio or features");
  return ReadFeaturesFile(entry.features);
}

void GmmConfig::Validate() const {
  if (states_per_phone < 1 || mono_iterations < 1 || tri_iterations < 1 || max_leaves < 1 ||
      components < 1 || var_floor <= 0.0 || min_leaf_count < 0.0)
    ThrowError(ErrorCode::kInvalidArgument, "bad GMM training config");
}

KvConfig GmmConfig::ToKv() const {
  KvConfig kv;
  kv.Set("states_per_phone", states_per_phone);
  kv.Set("mono_iterations", mono_iterations);
  kv.Set("tri_iterations", tri_iterations);
  kv.Set("max_leaves", max_leaves);
  kv.Set("min_leaf_count", min_leaf_count);
  kv.Set("components", components);
  kv.Set("var_floor", var_floor);
  return kv;
}

GmmConfig GmmConfig::FromKv(const KvConfig &kv) {
  GmmConfig c;
  c.states_per_phone = static_cast<int>(kv.GetInt("states_per_phone", c.states_per_phone));
  c.mono_iterations = static_cast<int>(kv.GetInt("mono_iterations", c.mono_iterations));
  c.tri_iterations = static_cast<int>(kv.GetInt("tri_iterations", c.tri_iterations));
  c.max_leaves = static_cast<int>(kv.GetInt("max_leaves", c.max_leaves));
  c.min_leaf_count = kv.GetDouble("min_leaf_count", c.min_leaf_count);
  c.components = static_cast<int>(kv.GetInt("components", c.components));
  c.var_floor = kv.GetDouble("var_floor", c.var_floor);
  c.Validate();
  return c;
}

GmmSystem TrainGmmSystem(const FeatureSet &feats, const Transcripts &transcripts,
                         const Lexicon &lexicon, const PhoneSet &phones, const GmmConfig &cfg) {
  cfg.Validate();
  lexicon.Validate(phones);
  const int spp = cfg.states_per_phone;
  const int num_phones = phones.NumPhones();
  const HmmTopology topo = HmmTopology::Uniform012(spp);

  GmmSystem sys;
  AcousticModel shell;
  shell.phones = phones;
  shell.topology = topo;
  shell.tree = CartTree::Monophone(num_phones, spp);
  std::vector<TrainingUtterance> corpus = MakeTrainingSet(feats, transcripts, lexicon, shell);

  AcousticModel mono0 =
      InitializeFromLinearAlignment(corpus, phones, topo, shell.tree, cfg.var_floor);
  BaumWelchOptions mono_opts;
  mono_opts.iterations = cfg.mono_iterations;
  mono_opts.var_floor = cfg.var_floor;
  BaumWelchResult mono = BaumWelchTrain(corpus, mono0, mono_opts);
  sys.monophone = mono.model;
  sys.mono_log_likelihood = mono.log_likelihood;

  // Triphone statistics from the monophone Viterbi alignment.
  std::map<ContextState, CartStats> stats;
  std::vector<std::vector<int>> state_ali;
  std::vector<TrainingUtterance> aligned;
  for (auto &utt : corpus) {
    StateGraph graph = utt.graph;
    sys.monophone.ResolveGraph(&graph);
    Alignment ali;
    try {
      ali = ViterbiAlign(graph, sys.monophone.EmissionScores(utt.feats));
    } catch (const AsrError &e) {
      if (e.code() != ErrorCode::kNoPath) throw;
      continue;
    }
    const std::size_t dim = utt.feats.Dim();
    for (std::size_t t = 0; t < ali.states.size(); ++t) {
      const ContextState &ctx = graph.States()[ali.states[t]].context;
      CartStats &s = stats[ctx];
      if (s.sum.empty()) {
        s.context = ctx;
        s.sum.assign(dim, 0.0);
        s.sumsq.assign(dim, 0.0);
      }
      s.count += 1.0;
      const auto row = utt.feats.frames.Row(t);
      for (std::size_t d = 0; d < dim; ++d) {
        s.sum[d] += row[d];
        s.sumsq[d] += row[d] * row[d];
      }
    }
    state_ali.push_back(std::move(ali.states));
    aligned.push_back(utt);
  }
  if (aligned.empty()) ThrowError(ErrorCode::kNoPath, "no utterance could be aligned");

  std::vector<CartStats> flat;
  for (auto &[ctx, s] : stats) flat.push_back(std::move(s));
  CartOptions copts;
  copts.max_leaves = cfg.max_leaves;
  copts.min_count = cfg.min_leaf_count;
  copts.var_floor = cfg.var_floor;
  const CartTree tree = BuildCart(flat, DefaultQuestions(num_phones, phones.Silence(), spp), copts);

  AcousticModel tri0 =
      InitializeFromAlignments(aligned, state_ali, phones, topo, tree, cfg.var_floor);
  BaumWelchOptions tri_opts;
  tri_opts.iterations = cfg.tri_iterations;
  tri_opts.target_components = cfg.components;
  tri_opts.split_interval = 1;
  tri_opts.var_floor = cfg.var_floor;
  BaumWelchResult tri = BaumWelchTrain(corpus, tri0, tri_opts);
  sys.model = tri.model;
  sys.tri_log_likelihood = tri.log_likelihood;
  return sys;
}

Alignments AlignCorpus(const AcousticModel &model, const Lexicon &lexicon, const FeatureSet &feats,
                       const Transcripts &transcripts) {
  Alignments out;
  for (const auto &[id, words] : transcripts) {
    auto it = feats.find(id);
    if (it == feats.end()) ThrowError(ErrorCode::kIdMismatch, "no features for '", id, "'");
    StateGraph graph = ExpandTranscript(words, lexicon, model);
    out[id] = ViterbiAlign(graph, model.EmissionScores(it->second)).emissions;
  }
  return out;
}

void WriteAlignments(const std::string &path, const Alignments &ali) {
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write '", path, "'");
  for (const auto &[id, labels] : ali) {
    os << id;
    for (int l : labels) os << ' ' << l;
    os << '\n';
  }
  if (!os) ThrowError(ErrorCode::kIoError, "write failed for '", path, "'");
}

Alignments ReadAlignments(const std::string &path) {
  std::ifstream is(path);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot read '", path, "'");
  Alignments out;
  std::string line;
  while (std::getline(is, line)) {
    std::istringstream ls(line);
    std::string id;
    if (!(ls >> id)) continue;
    std::vector<int> labels;
    int l;
    while (ls >> l) labels.push_back(l);
    if (!ls.eof()) ThrowError(ErrorCode::kFormatError, "bad alignment line for '", id, "'");
    out[id] = std::move(labels);
  }
  return out;
}

KvConfig LmConfig::ToKv() const {
  KvConfig kv;
  kv.Set("order", order);
  kv.Set("discount", discount);
  return kv;
}

LmConfig LmConfig::FromKv(const KvConfig &kv) {
  LmConfig c;
  c.order = static_cast<int>(kv.GetInt("order", c.order));
  c.discount = kv.GetDouble("discount", c.discount);
  if (c.order < 1 || c.discount <= 0.0 || c.discount >= 1.0)
    ThrowError(ErrorCode::kInvalidArgument, "bad LM config");
  return c;
}

NGramModel TrainLm(const std::vector<std::vector<std::string>> &text, const Lexicon &lexicon,
                   const LmConfig &cfg) {
  const Vocabulary vocab(lexicon.Words());
  KneserNeyOptions opts;
  opts.discounts = {cfg.discount};
  return EstimateKneserNey(CountNGrams(text, cfg.order), opts, &vocab);
}

KvConfig DecodeSettings::ToKv() const {
  KvConfig kv;
  kv.Merge(DecodeConfigToKv(gmm), "gmm");
  kv.Merge(DecodeConfigToKv(hybrid), "hybrid");
  kv.Set("prior_floor", prior_floor);
  return kv;
}

DecodeSettings DecodeSettings::FromKv(const KvConfig &kv) {
  DecodeSettings s;
  s.gmm = DecodeConfigFromKv(kv.Section("gmm"), s.gmm);
  s.hybrid = DecodeConfigFromKv(kv.Section("hybrid"), s.hybrid);
  s.prior_floor = kv.GetDouble("prior_floor", s.prior_floor);
  return s;
}

Transcripts DecodeWithGmm(const AcousticModel &model, const Lexicon &lexicon,
                          const LanguageModel &lm, const FeatureSet &feats,
                          const std::vector<std::string> &ids, const DecodeConfig &cfg) {
  const Decoder decoder(model, lexicon, lm, cfg);
  Transcripts out;
  for (const auto &id : ids) {
    auto it = feats.find(id);
    if (it == feats.end()) ThrowError(ErrorCode::kIdMismatch, "no features for '", id, "'");
    try {
      out[id] = decoder.Decode(it->second).words;
    } catch (const AsrError &e) {
      if (e.code() != ErrorCode::kNoHypothesis) throw;
      out[id] = {};
    }
  }
  return out;
}

Transcripts DecodeWithHybrid(const HybridModel &net, const std::vector<double> &priors,
                             const AcousticModel &graph_model, const Lexicon &lexicon,
                             const LanguageModel &lm,
                             const std::vector<FinetuneUtterance> &utts, const DecodeConfig &cfg) {
  if (static_cast<int>(priors.size()) != graph_model.NumEmissions() ||
      net.Config().num_labels != graph_model.NumEmissions())
    ThrowError(ErrorCode::kDimensionMismatch, "network outputs ", net.Config().num_labels,
               ", priors ", priors.size(), ", tied states ", graph_model.NumEmissions());
  const Decoder decoder(graph_model, lexicon, lm, cfg);
  Transcripts out;
  for (const auto &utt : utts) {
    const Matrix scores = PosteriorToScaledLikelihood(Posteriors(net, utt), priors);
    try {
      out[utt.id] = decoder.Decode(scores).words;
    } catch (const AsrError &e) {
      if (e.code() != ErrorCode::kNoHypothesis) throw;
      out[utt.id] = {};
    }
  }
  return out;
}

std::vector<FinetuneUtterance> MakeFinetuneData(const std::vector<const ManifestEntry *> &entries,
                                                const FeatureSet &feats, const Alignments &ali) {
  std::vector<FinetuneUtterance> out;
  for (const ManifestEntry *e : entries) {
    FinetuneUtterance u;
    u.id = e->id;
    auto f = feats.find(e->id);
    if (f == feats.end()) ThrowError(ErrorCode::kIdMismatch, "no features for '", e->id, "'");
    u.feats = f->second.frames;
    if (!e->audio.empty()) u.samples = NormalizeWaveform(ReadWave(e->audio)).audio.samples;
    auto a = ali.find(e->id);
    if (a != ali.end()) {
      if (a->second.size() != f->second.NumFrames())
        ThrowError(ErrorCode::kLengthMismatch, "alignment of '", e->id, "' has ",
                   a->second.size(), " frames, features ", f->second.NumFrames());
      u.labels = a->second;
    }
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<AudioSegment> LoadAudio(const std::vector<const ManifestEntry *> &entries) {
  std::vector<AudioSegment> out;
  for (const ManifestEntry *e : entries) {
    if (e->audio.empty()) ThrowError(ErrorCode::kFormatError, "entry '", e->id, "' has no audio");
    AudioSegment seg = ReadWave(e->audio);
    seg.id = e->id;
    out.push_back(std::move(seg));
  }
  return out;
}

void WriteVector(const std::string &path, const std::vector<double> &v) {
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write '", path, "'");
  for (double x : v) os << FormatDouble(x) << '\n';
  if (!os) ThrowError(ErrorCode::kIoError, "write failed for '", path, "'");
}

std::vector<double> ReadVector(const std::string &path) {
  std::ifstream is(path);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot read '", path, "'");
  std::vector<double> v;
  double x;
  while (is >> x) v.push_back(x);
  if (!is.eof()) ThrowError(ErrorCode::kFormatError, "bad number in '", path, "'");
  return v;
}

}  // namespace asrlab

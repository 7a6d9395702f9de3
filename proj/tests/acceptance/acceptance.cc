// tests/acceptance/acceptance.cc

// Copyright 2026  asrlab authors

// See ../../../COPYING for clarification regarding multiple authors
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

// Acceptance run: one line per criterion, nonzero exit on any failure.
//
//   acceptance [--only N[,N...]] [--work DIR]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hmm-oracle.h"

#include "base/asr-error.h"
#include "base/rand.h"
#include "decoder/wer.h"
#include "finetune/finetune.h"
#include "hmm/acoustic-model.h"
#include "hmm/baum-welch.h"
#include "hmm/cart.h"
#include "hmm/state-graph.h"
#include "lm/lm-eval.h"
#include "lm/ngram-counts.h"
#include "lm/ngram-model.h"
#include "nnet/grad-check.h"
#include "nnet/ops.h"
#include "pipeline/experiment.h"
#include "ssl/masking.h"
#include "ssl/ssl-losses.h"
#include "ssl/wav2vec-model.h"

using namespace asrlab;
using nnet::Constant;
using nnet::Tensor;
using nnet::Var;

namespace {

class Verdict {
 public:
  void Expect(bool ok, const std::string &what) {
    ++checks_;
    if (!ok) {
      if (failures_ < 8) std::printf("    failed: %s\n", what.c_str());
      ++failures_;
    }
  }
  bool Passed() const { return failures_ == 0 && checks_ > 0; }
  int Checks() const { return checks_; }
  int Failures() const { return failures_; }

 private:
  int checks_ = 0;
  int failures_ = 0;
};

std::string Fmt(const char *f, double a, double b = 0.0) {
  char buf[160];
  std::snprintf(buf, sizeof(buf), f, a, b);
  return buf;
}

Tensor RandomTensor(Rng &rng, std::vector<int> shape, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double &v : t.Data()) v = scale * rng.Gauss();
  return t;
}

// ---------------------------------------------------------------- 1

HmmTopology RandomTopology(Rng &rng, int classes) {
  HmmTopology topo;
  topo.states_per_phone = classes;
  for (int c = 0; c < classes; ++c) {
    double p[3], sum = 0;
    for (double &x : p) sum += (x = 0.05 + rng.Uniform());
    topo.log_probs.push_back({std::log(p[0] / sum), std::log(p[1] / sum), std::log(p[2] / sum)});
  }
  return topo;
}

void HmmOracle(Verdict *v) {
  Rng rng(1001);
  int models = 0, attempts = 0;
  while (models < 50 && attempts < 1000) {
    ++attempts;
    const int S = 1 + rng.Index(4);
    const std::size_t T = 1 + rng.Index(6);
    const HmmTopology topo = RandomTopology(rng, 1 + rng.Index(3));
    std::vector<GraphState> states;
    for (int s = 0; s < S; ++s) states.push_back({s, s % topo.NumClasses(), {0, 0, 0, s}});
    const StateGraph g = StateGraph::LinearChain(states, topo);
    Matrix sc(T, S);
    for (double &x : sc.Data()) x = -4.0 * rng.Uniform() - 0.05;
    const auto en = oracle::EnumeratePaths(g, sc);
    if (en.num_paths == 0) {
      bool threw = false;
      try {
        ForwardLogLikelihood(g, sc);
      } catch (const AsrError &e) {
        threw = e.code() == ErrorCode::kNoPath;
      }
      v->Expect(threw, "NoPath on an infeasible model");
      continue;
    }
    ++models;
    const double ll = std::log(en.total_prob);
    v->Expect(std::abs(ForwardLogLikelihood(g, sc) - ll) <= 1e-10, Fmt("forward vs enumeration, ll %g", ll));
    const Matrix post = ForwardBackwardPosteriors(g, sc);
    double worst = 0.0;
    for (std::size_t t = 0; t < T; ++t)
      for (int s = 0; s < S; ++s)
        worst = std::max(worst, std::abs(post(t, s) - en.occupancy(t, s) / en.total_prob));
    v->Expect(worst <= 1e-9, Fmt("posterior deviation %g", worst));
    const Alignment ali = ViterbiAlign(g, sc);
    v->Expect(ali.states == en.best_states, "viterbi argmax path");
  }
  v->Expect(models == 50, "50 feasible random models");
}

// ---------------------------------------------------------------- 2

TrainingUtterance ChainUtterance(const std::string &id, const FeatureMatrix &feats, int num_states) {
  std::vector<GraphState> states;
  for (int s = 0; s < num_states; ++s) states.push_back({0, s % 3, {0, s / 3, 0, s % 3}});
  return {id, feats, StateGraph::LinearChain(states, HmmTopology::Uniform012())};
}

void EmMonotone(Verdict *v) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    Rng rng(500 + seed);
    std::vector<TrainingUtterance> corpus;
    for (int u = 0; u < 10; ++u) {
      FeatureMatrix f;
      f.frames.Resize(0, 0);
      for (int s = 0; s < 6; ++s) {
        const int dur = 2 + rng.Index(5);
        for (int k = 0; k < dur; ++k) {
          std::vector<double> x{s * 0.8 + 0.6 * rng.Gauss(), (s % 3) * 1.5 + 0.6 * rng.Gauss(),
                                rng.Gauss()};
          f.frames.AppendRow(x);
        }
      }
      corpus.push_back(ChainUtterance("u" + std::to_string(u), f, 6));
    }
    const PhoneSet phones({"sil", "a", "b"}, "sil");
    const HmmTopology topo = HmmTopology::FromProbs(3, 0.5, 0.35, 0.15);
    const AcousticModel init =
        InitializeFromLinearAlignment(corpus, phones, topo, CartTree::Monophone(3, 3), 1e-3);
    BaumWelchOptions opts;
    opts.iterations = 10;
    const BaumWelchResult res = BaumWelchTrain(corpus, init, opts);
    v->Expect(res.log_likelihood.size() == 10, "10 iterations logged");
    for (std::size_t i = 1; i < res.log_likelihood.size(); ++i)
      v->Expect(res.log_likelihood[i] >= res.log_likelihood[i - 1] - 1e-8,
                Fmt("log-likelihood drop %g at iteration %g",
                    res.log_likelihood[i - 1] - res.log_likelihood[i], static_cast<double>(i)));
  }

  Rng rng(777);
  const std::vector<double> mu{0.8, -1.2, 2.0}, var{1.5, 0.4, 0.9};
  FeatureMatrix feats;
  feats.frames.Resize(2000, 3);
  for (std::size_t t = 0; t < 2000; ++t)
    for (int d = 0; d < 3; ++d) feats.frames(t, d) = mu[d] + std::sqrt(var[d]) * rng.Gauss();
  const HmmTopology topo = HmmTopology::FromProbs(1, 0.9, 0.1, 0.0);
  std::vector<TrainingUtterance> corpus{{"u", feats, StateGraph::LinearChain({{0, 0, {}}}, topo)}};
  AcousticModel init;
  init.phones = PhoneSet({"sil"}, "sil");
  init.topology = topo;
  init.tree = CartTree::Monophone(1, 1);
  init.emissions.assign(1, DiagGmm(std::vector<double>{0.0, 0.0, 0.0}, std::vector<double>{1.0, 1.0, 1.0}));
  BaumWelchOptions opts;
  opts.iterations = 4;
  const BaumWelchResult res = BaumWelchTrain(corpus, init, opts);
  const DiagGmm &g = res.model.emissions[0];
  for (int d = 0; d < 3; ++d) {
    v->Expect(std::abs(g.Means()(0, d) - mu[d]) < 0.05, Fmt("mean dim %g off by %g", d, g.Means()(0, d) - mu[d]));
    v->Expect(std::abs(g.Vars()(0, d) - var[d]) < 0.1, Fmt("variance dim %g off by %g", d, g.Vars()(0, d) - var[d]));
  }
}

// ---------------------------------------------------------------- 3

struct EditCounts {
  long e, s, i, d;
};

// Every alignment path; fewest edits, then most substitutions.
EditCounts BruteForceEdits(const std::vector<std::string> &r, const std::vector<std::string> &h) {
  EditCounts best{1 << 30, 0, 0, 0};
  std::function<void(std::size_t, std::size_t, EditCounts)> rec = [&](std::size_t i, std::size_t j,
                                                                      EditCounts c) {
    if (c.e > best.e) return;
    if (i == r.size() && j == h.size()) {
      if (c.e < best.e || c.s > best.s) best = c;
      return;
    }
    if (i < r.size() && j < h.size()) {
      const bool sub = r[i] != h[j];
      rec(i + 1, j + 1, {c.e + sub, c.s + sub, c.i, c.d});
    }
    if (j < h.size()) rec(i, j + 1, {c.e + 1, c.s, c.i + 1, c.d});
    if (i < r.size()) rec(i + 1, j, {c.e + 1, c.s, c.i, c.d + 1});
  };
  rec(0, 0, {0, 0, 0, 0});
  return best;
}

void WerOracle(Verdict *v) {
  using Words = std::vector<std::string>;
  const WerBreakdown same = ComputeWer({"a", "b", "c"}, {"a", "b", "c"});
  v->Expect(same.Errors() == 0 && same.wer == 0.0, "identical strings");
  const WerBreakdown sub = ComputeWer({"a", "b", "c"}, {"a", "x", "c"});
  v->Expect(sub.substitutions == 1 && sub.insertions == 0 && sub.deletions == 0, "one substitution");
  v->Expect(sub.wer == 1.0 / 3.0, "wer 1/3");
  const WerBreakdown ins = ComputeWer({"a"}, {"x", "y"});
  v->Expect(ins.substitutions == 1 && ins.insertions == 1 && ins.deletions == 0, "S1 I1");
  v->Expect(ins.wer == 2.0, "wer 2.0");

  Rng rng(31337);
  auto words = [&rng](int min_len) {
    Words w(min_len + rng.Index(9 - min_len));
    for (auto &x : w) x = std::string(1, static_cast<char>('a' + rng.Index(4)));
    return w;
  };
  for (int trial = 0; trial < 1000; ++trial) {
    const Words r = words(1), h = words(0);
    const EditCounts o = BruteForceEdits(r, h);
    const WerBreakdown w = ComputeWer(r, h);
    v->Expect(w.Errors() == o.e && w.substitutions == o.s && w.insertions == o.i && w.deletions == o.d,
              Fmt("pair %g: %g edits expected", trial, static_cast<double>(o.e)));
    v->Expect(w.wer == static_cast<double>(o.s + o.i + o.d) / r.size(), "wer formula");
  }
}

// ---------------------------------------------------------------- 4

double SumOverVocab(const LanguageModel &lm, const std::vector<int> &hist) {
  double s = 0;
  for (int w = 0; w < lm.Vocab().Size(); ++w)
    if (w != Vocabulary::kBos) s += std::pow(10.0, lm.LogProb(w, hist));
  return s;
}

void KneserNey(Verdict *v) {
  Rng rng(4242);
  for (int trial = 0; trial < 20; ++trial) {
    TextCorpus corpus;
    const int vocab = 3 + rng.Index(6);
    for (int s = 0; s < 10 + rng.Index(15); ++s) {
      std::vector<std::string> sent(1 + rng.Index(7));
      for (auto &w : sent) w = "w" + std::to_string(std::min(rng.Index(vocab), rng.Index(vocab)));
      corpus.push_back(sent);
    }
    const int order = 1 + trial % 4;
    const double d = 0.2 + 0.7 * rng.Uniform();
    const NGramModel lm = EstimateKneserNey(CountNGrams(corpus, order), {{d}});
    double worst = 0.0;
    for (const auto &h : lm.Histories()) worst = std::max(worst, std::abs(SumOverVocab(lm, h) - 1.0));
    v->Expect(worst <= 1e-9, Fmt("normalization deviation %g", worst));
  }

  // a b a b with D = 0.5: continuation counts N(.a) = 2, N(.b) = N(.</s>) = 1,
  // four predictable types {a, b, </s>, <unk>}
  const NGramModel lm = EstimateKneserNey(CountNGrams({{"a", "b", "a", "b"}}, 2), {{0.5}});
  const double uni_a = 1.5 / 4 + 0.375 / 4, uni_b = 0.5 / 4 + 0.375 / 4, uni_unk = 0.375 / 4;
  const std::vector<std::pair<double, double>> hand{
      {std::pow(10, lm.LogProb("b", {"a"})), 0.75 + 0.25 * uni_b},
      {std::pow(10, lm.LogProb("a", {"a"})), 0.25 * uni_a},
      {std::pow(10, lm.LogProb("a", {"b"})), 0.25 + 0.5 * uni_a},
      {std::pow(10, lm.LogProb("</s>", {"b"})), 0.25 + 0.5 * uni_b},
      {std::pow(10, lm.LogProb("zzz", {"a"})), 0.25 * uni_unk},
      {std::pow(10, lm.LogProb("a", {})), uni_a}};
  for (const auto &[got, want] : hand) v->Expect(std::abs(got - want) < 1e-12, Fmt("hand %g vs %g", got, want));
  v->Expect(std::abs(0.75 + 0.25 * uni_b - 0.8046875) < 1e-15, "p(b|a) = 0.8046875");

  TextCorpus in_domain, other;
  for (int i = 0; i < 50; ++i) {
    in_domain.push_back({"call", "the", rng.Bernoulli(0.5) ? "doctor" : "nurse"});
    other.push_back({"play", rng.Bernoulli(0.5) ? "the" : "some", "music"});
  }
  TextCorpus all = in_domain;
  all.insert(all.end(), other.begin(), other.end());
  const Vocabulary shared = Vocabulary::FromCorpus(all);
  auto ma = std::make_shared<const NGramModel>(EstimateKneserNey(CountNGrams(other, 3), {}, &shared));
  auto mb = std::make_shared<const NGramModel>(EstimateKneserNey(CountNGrams(in_domain, 3), {}, &shared));
  TextCorpus dev;
  for (int i = 0; i < 8; ++i) dev.push_back({"call", "the", i % 2 ? "doctor" : "nurse"});
  dev.push_back({"play", "the", "music"});
  const WeightTuningResult tuned = TuneWeights({ma, mb}, dev);
  v->Expect(tuned.weights[1] > tuned.weights[0], Fmt("in-domain weight %g vs %g", tuned.weights[1], tuned.weights[0]));
  v->Expect(tuned.log10_likelihood.size() >= 2, "EM iterations logged");
  for (std::size_t i = 1; i < tuned.log10_likelihood.size(); ++i)
    v->Expect(tuned.log10_likelihood[i] >= tuned.log10_likelihood[i - 1] - 1e-12, "dev likelihood monotone");
}

// ---------------------------------------------------------------- 5

Var Project(const Var &out, std::uint64_t seed) {
  Rng rng(seed);
  return nnet::SumAll(nnet::Mul(out, Constant(RandomTensor(rng, out->value.Shape()))));
}

void GradChecks(Verdict *v) {
  Rng rng(55);
  auto check = [&](const std::string &op, const std::function<Var(const std::vector<Var> &)> &f,
                   const std::vector<Tensor> &inputs) {
    const nnet::GradCheckResult r = nnet::CheckGradients(f, inputs, 1e-4);
    v->Expect(r.max_rel_error < 1e-4, op + Fmt(": rel error %g", r.max_rel_error));
  };
  const std::vector<std::pair<int, int>> shapes{{1, 2}, {2, 3}, {4, 2}, {3, 5}, {6, 4}};
  for (auto [r, c] : shapes) {
    const Tensor x = RandomTensor(rng, {r, c});
    check("linear", [](auto &a) { return Project(nnet::Linear(a[0], a[1], a[2]), 1); },
          {x, RandomTensor(rng, {c, 3}), RandomTensor(rng, {3})});
    check("layer-norm", [](auto &a) { return Project(nnet::LayerNorm(a[0], a[1], a[2]), 2); },
          {x, RandomTensor(rng, {c}), RandomTensor(rng, {c})});
    check("gelu", [](auto &a) { return Project(nnet::Gelu(a[0]), 3); }, {x});
    check("relu", [](auto &a) { return Project(nnet::Relu(a[0]), 4); }, {x});
    check("attention", [](auto &a) { return Project(nnet::ScaledDotAttention(a[0], a[1], a[2]), 5); },
          {x, RandomTensor(rng, {r + 2, c}), RandomTensor(rng, {r + 2, 3})});
    std::vector<int> labels(r);
    for (int &l : labels) l = rng.Index(c);
    const Tensor logits = RandomTensor(rng, {r, c}, 1.5);
    check("cross-entropy", [labels](auto &a) { return nnet::CrossEntropy(a[0], labels); }, {logits});
    check("focal", [labels](auto &a) { return nnet::FocalLoss(a[0], labels, 2.0); }, {logits});
    const auto cand = ssl::SampleCandidates(r + 1, std::min(r, 3), &rng);
    check("contrastive", [cand](auto &a) { return ssl::ContrastiveLoss(a[0], a[1], cand, 0.5); },
          {RandomTensor(rng, {r + 1, c}), RandomTensor(rng, {r + 1, c})});
  }
  struct ConvCase {
    int t, cin, cout, k, stride, pad, groups;
  };
  for (ConvCase cs : {ConvCase{5, 1, 2, 2, 1, 0, 1}, ConvCase{7, 2, 4, 3, 2, 0, 2},
                      ConvCase{6, 4, 4, 3, 1, 1, 4}, ConvCase{9, 3, 2, 4, 3, 2, 1},
                      ConvCase{10, 2, 3, 5, 5, 0, 1}})
    check("conv1d",
          [cs](auto &a) { return Project(nnet::Conv1d(a[0], a[1], a[2], cs.stride, cs.pad, cs.groups), 6); },
          {RandomTensor(rng, {cs.t, cs.cin}), RandomTensor(rng, {cs.k, cs.cin / cs.groups, cs.cout}),
           RandomTensor(rng, {cs.cout})});
  const int d = 6;
  for (int heads : {1, 2, 3, 6, 2}) {
    std::vector<Tensor> in{RandomTensor(rng, {2 + heads % 3, d})};
    for (int i = 0; i < 4; ++i) {
      in.push_back(RandomTensor(rng, {d, d}, 0.5));
      in.push_back(RandomTensor(rng, {d}, 0.1));
    }
    check("multi-head", [heads](auto &a) {
      const nnet::AttentionParams p{a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
      return Project(nnet::MultiHeadAttention(a[0], p, heads), 7);
    }, in);
  }
  for (auto [din, hid] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {3, 2}, {2, 3}, {4, 2}}) {
    // three unrolled steps from a random initial state
    check("lstm", [](auto &a) {
      nnet::LstmState s{a[1], a[2]};
      std::vector<Var> outs;
      for (int t = 0; t < 3; ++t) {
        s = nnet::LstmCell(nnet::SliceRows(a[0], t, 1), s, {a[3], a[4], a[5]});
        outs.push_back(s.h);
      }
      return Project(nnet::ConcatRows(outs), 8);
    }, {RandomTensor(rng, {3, din}), RandomTensor(rng, {1, hid}), RandomTensor(rng, {1, hid}),
        RandomTensor(rng, {din, 4 * hid}, 0.5), RandomTensor(rng, {hid, 4 * hid}, 0.5),
        RandomTensor(rng, {4 * hid}, 0.5)});
  }
}

// ---------------------------------------------------------------- 6

void Wav2vecStructure(Verdict *v) {
  const ssl::EncoderConfig base = ssl::BaseConfig();
  v->Expect(base.sample_rate == 16000.0, "16 kHz input");
  v->Expect(base.TotalStride() == 320, Fmt("stride %g samples", base.TotalStride()));
  v->Expect(std::abs(base.FrameSeconds() - 0.020) < 1e-15, Fmt("frame %g s", base.FrameSeconds()));
  v->Expect(base.ReceptiveField() == 400, Fmt("receptive field %g", base.ReceptiveField()));

  const ssl::EncoderConfig half = ssl::HalveOneStride(base);
  v->Expect(half.sample_rate == 8000.0, "halved config runs at 8 kHz");
  v->Expect(half.TotalStride() == 160, "halved stride 160 samples");
  v->Expect(std::abs(half.FrameSeconds() - 0.020) < 1e-15, Fmt("halved frame %g s", half.FrameSeconds()));
  v->Expect(half.OutputLength(8000 * 3) == base.OutputLength(16000 * 3), "3 s gives equal frame counts");

  Rng rng(66);
  for (int trial = 0; trial < 20; ++trial) {
    const int rows = 1 + rng.Index(8), cols = 2 + rng.Index(6);
    const Tensor z = RandomTensor(rng, {rows, cols}, 2.0);
    std::vector<int> labels(rows);
    for (int &l : labels) l = rng.Index(cols);
    v->Expect(nnet::ScalarValue(nnet::FocalLoss(Constant(z), labels, 0.0)) ==
                  nnet::ScalarValue(nnet::CrossEntropy(Constant(z), labels)),
              "focal(0) == CE");
    v->Expect(nnet::ScalarValue(FceLoss(Constant(z), labels, 0.0)) ==
                  nnet::ScalarValue(nnet::CrossEntropy(Constant(z), labels)),
              "fCE focal(0) == CE");
  }

  for (auto [g, n] : std::vector<std::pair<int, int>>{{1, 4}, {2, 320}, {2, 8}, {3, 5}}) {
    const Tensor uniform({7, g * n}, 1.0 / n);
    const double loss = nnet::ScalarValue(nnet::DiversityLoss(Constant(uniform), g));
    v->Expect(std::abs(loss) < 1e-12, Fmt("diversity at uniform usage %g", loss));
  }

  for (auto [p, m] : std::vector<std::pair<double, int>>{{0.065, 10}, {0.1, 4}, {0.02, 5}, {0.2, 2}}) {
    double total = 0.0;
    for (int seed = 0; seed < 50; ++seed) {
      Rng r(9000 + seed);
      const std::vector<bool> mask = ssl::SampleSpanMask(10000, {p, m}, &r);
      int ones = 0;
      for (bool b : mask) ones += b;
      total += ones / 10000.0;
    }
    const double expected = 1.0 - std::pow(1.0 - p, m);
    v->Expect(std::abs(total / 50 - expected) <= 0.02, Fmt("mask fraction %g vs %g", total / 50, expected));
  }
}

// ---------------------------------------------------------------- 7

void Accounting(Verdict *v) {
  const double blstm = static_cast<double>(BlstmParameterCount(BlstmConfig::Full()));
  const double trafo = static_cast<double>(TransformerParameterCount(TransformerConfig::Full()));
  std::printf("    BLSTM %.2fM, Transformer %.2fM parameters\n", blstm / 1e6, trafo / 1e6);
  v->Expect(std::abs(blstm - 25e6) <= 0.10 * 25e6, Fmt("BLSTM %g", blstm));
  v->Expect(std::abs(trafo - 90e6) <= 0.10 * 90e6, Fmt("Transformer %g", trafo));

  const auto large = ssl::Wav2VecParameterCount(ssl::LargeConfig());
  const auto large8 = ssl::Wav2VecParameterCount(ssl::Large8Config());
  std::printf("    Large %.1fM, Large1-8 %.1fM parameters\n", large / 1e6, large8 / 1e6);
  v->Expect(large8 < large, "Large1-8 smaller than Large");
  ssl::EncoderConfig trunc = ssl::LargeConfig();
  trunc.layers = 8;
  v->Expect(ssl::Wav2VecParameterCount(trunc) == large8, "Large1-8 is Large with 8 blocks");

  ssl::EncoderConfig cfg = ssl::ToyConfig();
  cfg.layers = 4;
  ssl::Wav2VecModel full(cfg);
  Rng rng(77);
  full.Initialize(nnet::InitScheme::kGlorot, &rng);
  const nnet::Checkpoint ck = full.ToCheckpoint();
  for (int keep : {1, 2, 3}) {
    const nnet::Checkpoint cut_ck = ssl::TruncateEncoder(ck, keep);
    v->Expect(cut_ck.NumParameters() < ck.NumParameters(), "truncation removes parameters");
    const ssl::Wav2VecModel cut = ssl::Wav2VecModel::FromCheckpoint(cut_ck);
    const Tensor wave = RandomTensor(rng, {1200, 1});
    const ssl::EncodeOutput a = ssl::Encode(full, Constant(wave), {});
    const ssl::EncodeOutput b = ssl::Encode(cut, Constant(wave), {});
    v->Expect(b.context->value == a.blocks[keep - 1]->value,
              Fmt("truncated output equals block %g of the full model", keep));
  }
}

// ---------------------------------------------------------------- 8 / 10

struct EndToEnd {
  bool ran = false;
  std::string report_txt, report_csv;
};

std::string Slurp(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

EndToEnd RunPipeline(const std::string &cache, Verdict *v) {
  std::filesystem::remove_all(cache);
  EndToEnd out;
  const ExperimentResult res = RunExperiment(DefaultExperimentConfig(), cache);
  for (const StageRecord &s : res.stages) {
    std::printf("    %-24s %7.1f s\n", s.name.c_str(), s.seconds);
    v->Expect(!s.cache_hit, "fresh cache: " + s.name + " ran");
  }
  out.ran = true;
  out.report_txt = Slurp(res.report_dir + "/report.txt");
  out.report_csv = Slurp(res.report_dir + "/report.csv");
  std::printf("%s", out.report_txt.c_str());
  const WerRow *gmm = res.report.Find("gmm", "dev");
  const WerRow *scratch = res.report.Find("scratch", "dev");
  const WerRow *pre = res.report.Find("pretrained", "dev");
  v->Expect(gmm && scratch && pre, "dev rows for gmm, scratch and pretrained");
  if (gmm && scratch && pre) {
    for (const WerRow *r : {gmm, scratch, pre})
      v->Expect(r->wer.wer <= 0.10, r->system + Fmt(" dev WER %g", r->wer.wer));
    v->Expect(pre->wer.wer <= scratch->wer.wer + 0.02,
              Fmt("pretrained %g vs scratch %g", pre->wer.wer, scratch->wer.wer));
  }
  return out;
}

// ---------------------------------------------------------------- 9

std::vector<FinetuneUtterance> SeparableSet(Rng &rng, const std::vector<std::vector<double>> &protos,
                                            int utts, const std::string &tag) {
  const int dim = static_cast<int>(protos[0].size());
  std::vector<FinetuneUtterance> out;
  for (int u = 0; u < utts; ++u) {
    FinetuneUtterance utt;
    utt.id = tag + std::to_string(u);
    utt.feats = Matrix(0, dim);
    for (int seg = 0; seg < 5; ++seg) {
      const int label = rng.Index(static_cast<int>(protos.size()));
      for (int i = 0, len = 3 + rng.Index(3); i < len; ++i) {
        std::vector<double> row(dim);
        for (int d = 0; d < dim; ++d) row[d] = protos[label][d] + 0.5 * rng.Gauss();
        utt.feats.AppendRow(row);
        utt.labels.push_back(label);
      }
    }
    out.push_back(std::move(utt));
  }
  return out;
}

void OnOff(Verdict *v) {
  Rng rng(99);
  std::vector<std::vector<double>> protos(3, std::vector<double>(6));
  for (auto &p : protos)
    for (double &x : p) x = 2.0 * rng.Gauss();
  const auto train = SeparableSet(rng, protos, 8, "tr");
  const auto dev = SeparableSet(rng, protos, 3, "dv");
  FinetuneConfig cfg;
  cfg.model.kind = EncoderKind::kTransformer;
  cfg.model.transformer = TransformerConfig::Toy(6);
  cfg.model.num_labels = 3;
  cfg.model.intermediate_layers = {1};
  cfg.inter.layers = {1};
  cfg.inter.variant = InterVariant::kIf;
  cfg.l2 = 0.005;
  cfg.batch_frames = 200;
  cfg.schedule = nnet::LrSchedule(3e-3).ExpDecay(0.8, 1e-5);
  cfg.epochs = 7;
  cfg.on_off.off_epochs = 3;
  cfg.seed = 5;
  HybridModel m = BuildFinetuneModel(cfg);
  const FinetuneResult r = Finetune(train, dev, cfg, &m);
  v->Expect(r.log.size() == 7, "7 epochs logged");
  if (r.log.size() != 7) return;
  int silent = 0;
  for (const auto &e : r.log)
    if (e.masked_cells == 0 && e.dropout_draws == 0 && e.inter == 0.0 && e.l2 == 0.0) ++silent;
    else break;
  v->Expect(silent == 3, Fmt("%g leading epochs without regularizers", silent));
  for (int e = 0; e < 7; ++e) {
    v->Expect(r.log[e].stage == (e < 3 ? "off" : "on"), "stage label");
    const int k = e < 3 ? e : e - 3;
    v->Expect(r.log[e].lr == cfg.schedule.Rate(k), Fmt("epoch %g lr", e));
  }
  for (int e = 3; e < 7; ++e)
    v->Expect(r.log[e].masked_cells > 0 && r.log[e].dropout_draws > 0 && r.log[e].inter > 0.0,
              Fmt("epoch %g regularizers active", e));
  v->Expect(r.log[3].lr == r.log[0].lr && r.log[3].lr > r.log[2].lr, "learning rate reset at the switch");

  // additive decomposition
  const FinetuneUtterance &a = train[0], &b = train[1];
  auto batch = [&](const FinetuneConfig &c) {
    Rng local(123);
    return ComputeBatchLoss(m, {&a, &b}, c, true, &local).loss;
  };
  const LossBreakdown full = batch(cfg);
  v->Expect(full.inter > 0.0 && full.l2 > 0.0, "both auxiliary terms nonzero");
  v->Expect(nnet::ScalarValue(full.total) == full.fce + cfg.inter.scale * full.inter + cfg.l2 * full.l2,
            "total == fCE + scale * inter + l2 * penalty");
  FinetuneConfig no_inter = cfg;
  no_inter.inter.scale = 0.0;
  const LossBreakdown ni = batch(no_inter);
  v->Expect(ni.fce == full.fce && nnet::ScalarValue(ni.total) == full.fce + cfg.l2 * full.l2, "drop inter term");
  FinetuneConfig no_l2 = cfg;
  no_l2.l2 = 0.0;
  const LossBreakdown nl = batch(no_l2);
  v->Expect(nnet::ScalarValue(nl.total) == full.fce + cfg.inter.scale * full.inter, "drop l2 term");
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"acceptance criteria"};
  std::vector<int> only;
  std::string work = (std::filesystem::temp_directory_path() / "asrlab-acceptance").string();
  app.add_option("--only", only, "criteria to run")->delimiter(',');
  app.add_option("--work", work, "scratch directory for the end-to-end runs");
  CLI11_PARSE(app, argc, argv);

  EndToEnd first;
  const std::map<int, std::pair<std::string, double>> info{
      {1, {"HMM forward/posterior/Viterbi vs path enumeration", 10}},
      {2, {"Baum-Welch monotone, single-Gaussian recovery", 30}},
      {3, {"WER vs brute-force edit distance", 5}},
      {4, {"Kneser-Ney normalization, hand oracle, interpolation", 10}},
      {5, {"gradient checks", 60}},
      {6, {"wav2vec structure", 30}},
      {7, {"architecture accounting and truncation", 10}},
      {8, {"synthetic end-to-end", 600}},
      {9, {"on-off regularization staging", 0}},
      {10, {"determinism of the WER report", 600}}};
  const std::map<int, std::function<void(Verdict *)>> body{
      {1, HmmOracle}, {2, EmMonotone}, {3, WerOracle}, {4, KneserNey}, {5, GradChecks},
      {6, Wav2vecStructure}, {7, Accounting},
      {8, [&](Verdict *v) { first = RunPipeline(work + "/run-a", v); }},
      {9, OnOff},
      {10, [&](Verdict *v) {
         if (!first.ran) first = RunPipeline(work + "/run-a", v);
         const EndToEnd second = RunPipeline(work + "/run-b", v);
         v->Expect(second.report_txt == first.report_txt, "report.txt identical");
         v->Expect(second.report_csv == first.report_csv, "report.csv identical");
       }}};

  int failed = 0;
  for (const auto &[id, run] : body) {
    if (!only.empty() && std::find(only.begin(), only.end(), id) == only.end()) continue;
    const auto &[name, limit] = info.at(id);
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(&v);
    } catch (const std::exception &e) {
      v.Expect(false, std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = limit <= 0 || secs < limit;
    if (!in_time) std::printf("    over the %.0f s limit\n", limit);
    const bool pass = v.Passed() && in_time;
    failed += !pass;
    std::printf("criterion %2d: %s  %8.2f s  %s (%d checks)\n", id, pass ? "PASS" : "FAIL", secs,
                name.c_str(), v.Checks());
    std::fflush(stdout);
  }
  std::filesystem::remove_all(work);
  return failed == 0 ? 0 : 1;
}

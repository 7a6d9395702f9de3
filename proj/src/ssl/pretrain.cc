// ssl/pretrain.cc

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

#include "ssl/pretrain.h"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "base/asr-error.h"
#include "ssl/ssl-losses.h"

namespace asrlab::ssl {

using namespace nnet;

Wav2VecModel InitPretrainModel(const PretrainConfig &cfg) {
  Wav2VecModel m(cfg.encoder);
  Rng rng(cfg.seed);
  m.Initialize(cfg.init, &rng);
  if (!cfg.init_checkpoint.empty()) LoadParameters(ReadCheckpoint(cfg.init_checkpoint), &m.Params());
  return m;
}

LossTerms PretrainLoss(const Wav2VecModel &m, const std::vector<double> &wave,
                       const PretrainConfig &cfg, double tau, Rng *rng, bool train) {
  LossTerms out;
  const int frames = cfg.encoder.OutputLength(static_cast<int>(wave.size()));
  EncodeOptions opts;
  opts.time_mask = SampleSpanMask(frames, cfg.mask, rng);
  opts.rng = train ? rng : nullptr;
  std::vector<int> masked;
  for (int t = 0; t < frames; ++t)
    if (opts.time_mask[t]) masked.push_back(t);
  if (masked.size() < 2) return out;
  const EncodeOutput enc = Encode(m, Constant(WaveTensor(wave)), opts);
  const Var feats = Dropout(enc.features, cfg.encoder.dropout_features, opts.rng);
  const QuantizerOutput q = Quantize(m, feats, QuantMode::kGumbel, tau, rng);
  const Var c = LinearLayer(m.Params(), "final_proj", GatherRows(enc.context, masked));
  const Var targets = GatherRows(q.q, masked);
  const auto cand = SampleCandidates(static_cast<int>(masked.size()), cfg.distractors, rng);
  const Var lc = ContrastiveLoss(c, targets, cand, cfg.kappa);
  const Var ld = DiversityLoss(q.probs, cfg.encoder.quantizer.groups);
  out.total = Add(lc, Scale(ld, cfg.diversity_weight));
  out.contrastive = ScalarValue(lc);
  out.diversity = ScalarValue(ld);
  out.valid = true;
  return out;
}

namespace {

std::vector<std::vector<double>> NormalizedCorpus(const std::vector<AudioSegment> &corpus) {
  std::vector<std::vector<double>> waves;
  for (const auto &seg : corpus) waves.push_back(NormalizeWaveform(seg).audio.samples);
  return waves;
}

double Temperature(const PretrainConfig &cfg, int epoch) {
  if (cfg.epochs <= 1) return cfg.tau_start;
  return cfg.tau_start + (cfg.tau_end - cfg.tau_start) * (epoch - 1) / (cfg.epochs - 1);
}

}  // namespace

KvConfig EncoderConfigToKv(const EncoderConfig &cfg) {
  KvConfig kv(cfg.ToMap());
  kv.Set("dropout_input", cfg.dropout_input);
  kv.Set("dropout_encoder", cfg.dropout_encoder);
  kv.Set("dropout_features", cfg.dropout_features);
  return kv;
}

EncoderConfig EncoderConfigFromKv(const KvConfig &kv) {
  EncoderConfig c = EncoderConfig::FromMap(kv.Values());
  c.dropout_input = kv.GetDouble("dropout_input", c.dropout_input);
  c.dropout_encoder = kv.GetDouble("dropout_encoder", c.dropout_encoder);
  c.dropout_features = kv.GetDouble("dropout_features", c.dropout_features);
  c.Validate();
  return c;
}

KvConfig PretrainConfig::ToKv() const {
  KvConfig kv;
  kv.Merge(EncoderConfigToKv(encoder), "encoder");
  kv.Set("mask_prob", mask.prob);
  kv.Set("mask_span", mask.span);
  kv.Set("distractors", distractors);
  kv.Set("kappa", kappa);
  kv.Set("diversity_weight", diversity_weight);
  kv.Set("tau_start", tau_start);
  kv.Set("tau_end", tau_end);
  kv.Set("epochs", epochs);
  kv.Set("batch_utterances", batch_utterances);
  kv.Set("lr", schedule.InitialRate());
  kv.Set("schedule", schedule.PhaseText());
  kv.Set("init", nnet::InitSchemeName(init));
  if (!init_checkpoint.empty()) kv.Set("init_checkpoint", init_checkpoint);
  if (!out_dir.empty()) kv.Set("out_dir", out_dir);
  kv.Set("seed", static_cast<long>(seed));
  return kv;
}

PretrainConfig PretrainConfig::FromKv(const KvConfig &kv) {
  PretrainConfig c;
  const KvConfig enc = kv.Section("encoder");
  if (!enc.Values().empty()) c.encoder = EncoderConfigFromKv(enc);
  c.mask.prob = kv.GetDouble("mask_prob", c.mask.prob);
  c.mask.span = kv.GetInt("mask_span", c.mask.span);
  c.mask.Validate();
  c.distractors = kv.GetInt("distractors", c.distractors);
  c.kappa = kv.GetDouble("kappa", c.kappa);
  c.diversity_weight = kv.GetDouble("diversity_weight", c.diversity_weight);
  c.tau_start = kv.GetDouble("tau_start", c.tau_start);
  c.tau_end = kv.GetDouble("tau_end", c.tau_end);
  c.epochs = kv.GetInt("epochs", c.epochs);
  c.batch_utterances = kv.GetInt("batch_utterances", c.batch_utterances);
  c.schedule = nnet::LrSchedule::Parse(kv.GetString("schedule", ""), kv.GetDouble("lr", 5e-4));
  c.init = nnet::ParseInitScheme(kv.GetString("init", nnet::InitSchemeName(c.init)));
  c.init_checkpoint = kv.GetString("init_checkpoint", "");
  c.out_dir = kv.GetString("out_dir", "");
  c.seed = kv.GetInt("seed", static_cast<long>(c.seed));
  return c;
}

PretrainResult Pretrain(const std::vector<AudioSegment> &corpus, const PretrainConfig &cfg,
                        Wav2VecModel *model) {
  if (corpus.empty()) ThrowError(ErrorCode::kInvalidArgument, "empty pre-training corpus");
  if (cfg.batch_utterances < 1 || cfg.epochs < 0)
    ThrowError(ErrorCode::kInvalidArgument, "bad batch size or epoch count");
  const auto waves = NormalizedCorpus(corpus);
  PretrainResult res;
  Rng rng(cfg.seed + 1);
  Nadam opt;
  ParameterStore &ps = model->Params();

  auto evaluate = [&](PretrainEpoch *row, double tau) {
    Rng eval_rng(cfg.seed + 2);
    int n = 0;
    for (const auto &w : waves) {
      const LossTerms lt = PretrainLoss(*model, w, cfg, tau, &eval_rng, false);
      if (!lt.valid) continue;
      row->loss += ScalarValue(lt.total);
      row->contrastive += lt.contrastive;
      row->diversity += lt.diversity;
      ++n;
    }
    if (n > 0) {
      row->loss /= n;
      row->contrastive /= n;
      row->diversity /= n;
    }
  };

  PretrainEpoch initial;
  initial.tau = Temperature(cfg, 1);
  evaluate(&initial, initial.tau);
  res.log.push_back(initial);

  auto save = [&](int epoch) {
    Checkpoint ck = model->ToCheckpoint();
    ck.meta["pretrain_epoch"] = std::to_string(epoch);
    std::ostringstream name;
    name << cfg.out_dir << "/epoch" << std::setw(3) << std::setfill('0') << epoch << ".ckpt";
    WriteCheckpoint(ck, name.str());
    return name.str();
  };
  if (!cfg.out_dir.empty()) {
    std::filesystem::create_directories(cfg.out_dir);
    res.initial_checkpoint = save(0);
  }
  std::vector<int> order(waves.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    PretrainEpoch row;
    row.epoch = epoch;
    row.lr = cfg.schedule.Rate(epoch - 1);
    row.tau = Temperature(cfg, epoch);
    std::shuffle(order.begin(), order.end(), rng.Engine());
    int n = 0;
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_utterances) {
      ps.ZeroGrad();
      const std::size_t end = std::min(order.size(), start + cfg.batch_utterances);
      int used = 0;
      std::vector<LossTerms> terms;
      for (std::size_t i = start; i < end; ++i) {
        LossTerms lt = PretrainLoss(*model, waves[order[i]], cfg, row.tau, &rng, true);
        if (lt.valid) terms.push_back(std::move(lt));
      }
      used = static_cast<int>(terms.size());
      if (used == 0) continue;
      for (const auto &lt : terms) {
        Backward(Scale(lt.total, 1.0 / used));
        row.loss += ScalarValue(lt.total);
        row.contrastive += lt.contrastive;
        row.diversity += lt.diversity;
        ++n;
      }
      opt.Step(&ps, row.lr);
    }
    if (n > 0) {
      row.loss /= n;
      row.contrastive /= n;
      row.diversity /= n;
    }
    res.log.push_back(row);
    if (!cfg.out_dir.empty()) {
      res.checkpoints.push_back(save(epoch));
      WritePretrainLog(res.log, cfg.out_dir + "/log.csv");
    }
  }
  if (!cfg.out_dir.empty()) WritePretrainLog(res.log, cfg.out_dir + "/log.csv");
  return res;
}

void WritePretrainLog(const std::vector<PretrainEpoch> &log, const std::string &path) {
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  os << "epoch,lr,tau,loss,contrastive,diversity\n";
  os << std::setprecision(10);
  for (const auto &r : log)
    os << r.epoch << ',' << r.lr << ',' << r.tau << ',' << r.loss << ',' << r.contrastive << ','
       << r.diversity << '\n';
}

}  // namespace asrlab::ssl

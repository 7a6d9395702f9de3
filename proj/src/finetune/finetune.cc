// finetune/finetune.cc

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

#include "finetune/finetune.h"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "base/asr-error.h"
#include "nnet/ops.h"

namespace asrlab {

using nnet::Tensor;

void FinetuneConfig::Validate() const {
  model.Validate();
  if (batch_frames <= 0) ThrowError(ErrorCode::kInvalidArgument, "batch_frames must be > 0");
  if (epochs < 0) ThrowError(ErrorCode::kInvalidArgument, "epochs must be >= 0");
  if (on_off.off_epochs < 0) ThrowError(ErrorCode::kInvalidArgument, "off_epochs must be >= 0");
  if (l2 < 0.0) ThrowError(ErrorCode::kInvalidArgument, "l2 must be >= 0");
  if (gradient_noise < 0.0) ThrowError(ErrorCode::kInvalidArgument, "gradient_noise must be >= 0");
  specaug.Validate();
  inter.Validate(model.EncoderDepth());
  for (int l : inter.layers)
    if (std::find(model.intermediate_layers.begin(), model.intermediate_layers.end(), l) ==
        model.intermediate_layers.end())
      ThrowError(ErrorCode::kInvalidArgument, "model has no intermediate head at layer ", l);
}

KvConfig FinetuneConfig::ToKv() const {
  KvConfig kv;
  kv.Merge(model.ToKv(), "model");
  kv.Set("batch_frames", batch_frames);
  kv.Set("lr", schedule.InitialRate());
  kv.Set("schedule", schedule.PhaseText());
  kv.Set("specaugment", specaugment);
  kv.Merge(specaug.ToKv(), "specaug");
  kv.Merge(inter.ToKv(), "inter");
  kv.Set("l2", l2);
  kv.Set("off_epochs", on_off.off_epochs);
  kv.Set("epochs", epochs);
  kv.Set("shuffle", shuffle);
  kv.Set("gradient_noise", gradient_noise);
  kv.Set("keep_best", keep_best);
  kv.Set("init", nnet::InitSchemeName(init));
  kv.Set("seed", static_cast<long>(seed));
  if (!log_path.empty()) kv.Set("log_path", log_path);
  return kv;
}

FinetuneConfig FinetuneConfig::FromKv(const KvConfig &kv) {
  FinetuneConfig c;
  c.inter = IntermediateLossSpec::FromKv(kv.Section("inter"));
  KvConfig m = kv.Section("model");
  if (!m.Has("intermediate_layers")) m.Set("intermediate_layers", kv.Section("inter").GetString("layers", ""));
  c.model = HybridConfig::FromKv(m);
  c.batch_frames = kv.GetInt("batch_frames", c.batch_frames);
  c.schedule = nnet::LrSchedule::Parse(kv.GetString("schedule", ""), kv.GetDouble("lr", 1e-5));
  c.specaugment = kv.GetBool("specaugment", c.specaugment);
  c.specaug = SpecAugmentConfig::FromKv(kv.Section("specaug"));
  c.l2 = kv.GetDouble("l2", c.l2);
  c.on_off.off_epochs = kv.GetInt("off_epochs", c.on_off.off_epochs);
  c.epochs = kv.GetInt("epochs", c.epochs);
  c.shuffle = kv.GetBool("shuffle", c.shuffle);
  c.gradient_noise = kv.GetDouble("gradient_noise", c.gradient_noise);
  c.keep_best = kv.GetBool("keep_best", c.keep_best);
  c.init = nnet::ParseInitScheme(kv.GetString("init", nnet::InitSchemeName(c.init)));
  c.seed = kv.GetInt("seed", static_cast<long>(c.seed));
  c.log_path = kv.GetString("log_path", "");
  c.Validate();
  return c;
}

HybridModel BuildFinetuneModel(const FinetuneConfig &cfg, const nnet::Checkpoint *encoder) {
  cfg.Validate();
  HybridModel m(cfg.model);
  Rng rng(cfg.seed);
  m.Initialize(cfg.init, &rng);
  if (encoder) m.LoadEncoder(*encoder);
  return m;
}

BatchLoss ComputeBatchLoss(const HybridModel &m, const std::vector<const FinetuneUtterance *> &batch,
                           const FinetuneConfig &cfg, bool regularize, Rng *rng) {
  BatchLoss out;
  for (const FinetuneUtterance *u : batch) out.frames += u->NumFrames();
  if (out.frames == 0) ThrowError(ErrorCode::kInvalidArgument, "empty fine-tuning batch");
  const bool w2v = m.Config().kind == EncoderKind::kWav2vec;
  const bool use_inter = regularize && cfg.inter.Enabled();
  const double out_gamma = use_inter ? cfg.inter.OutputGamma() : 0.0;
  Var fce, inter;
  for (const FinetuneUtterance *u : batch) {
    if (u->labels.empty()) ThrowError(ErrorCode::kLengthMismatch, "utterance ", u->id, " has no labels");
    ForwardOptions fo;
    fo.rng = regularize ? rng : nullptr;
    fo.intermediate = use_inter;
    Matrix augmented;
    const Matrix *feats = nullptr;
    if (regularize && cfg.specaugment) {
      if (w2v) {
        const AugmentMasks masks =
            SampleAugmentMasks(EncoderFrames(m, *u), m.Config().wav2vec.model_dim, cfg.specaug, rng);
        fo.time_mask = masks.frames;
        fo.channel_mask = masks.features;
        out.masked_cells += masks.MaskedCells();
      } else {
        augmented = u->feats;
        out.masked_cells += SpecAugment(&augmented, cfg.specaug, rng).MaskedCells();
        feats = &augmented;
      }
    }
    const ForwardOutput fw = Forward(m, *u, fo, feats);
    const double w = static_cast<double>(u->NumFrames()) / out.frames;
    Var f = nnet::Scale(FceLoss(fw.logits, u->labels, out_gamma), w);
    fce = fce ? nnet::Add(fce, f) : f;
    if (use_inter) {
      Var i = nnet::Scale(IntermediateLoss(m.Params(), fw.hidden, u->labels, cfg.inter, rng), w);
      inter = inter ? nnet::Add(inter, i) : i;
    }
  }
  Var l2;
  if (regularize && cfg.l2 > 0.0) {
    std::vector<Var> weights;
    const auto specs = m.ParameterSpecs();
    const auto values = m.Parameters();
    for (std::size_t i = 0; i < specs.size(); ++i)
      if (IsL2Weight(*specs[i])) weights.push_back(values[i]);
    l2 = L2Penalty(weights, 1.0);
  }
  out.loss = CombineLosses(fce, inter, cfg.inter.scale, l2, cfg.l2);
  return out;
}

double FrameAccuracy(const HybridModel &m, const std::vector<FinetuneUtterance> &utts) {
  long correct = 0, total = 0;
  for (const auto &u : utts) {
    const Var logits = Forward(m, u, {}).logits;
    if (logits->value.Rows() != static_cast<int>(u.labels.size()))
      ThrowError(ErrorCode::kLengthMismatch, "utterance ", u.id, " label count");
    for (int t = 0; t < logits->value.Rows(); ++t) {
      const auto row = logits->value.Row(t);
      const int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
      correct += best == u.labels[t];
      ++total;
    }
  }
  return total ? static_cast<double>(correct) / total : 0.0;
}

FinetuneResult Finetune(const std::vector<FinetuneUtterance> &train,
                        const std::vector<FinetuneUtterance> &dev, const FinetuneConfig &cfg,
                        HybridModel *model) {
  cfg.Validate();
  if (model->Config().ToKv() != cfg.model.ToKv())
    ThrowError(ErrorCode::kInvalidArgument, "model does not match the fine-tuning config");
  if (train.empty()) ThrowError(ErrorCode::kInvalidArgument, "no training utterances");
  Rng rng(cfg.seed + 0x9e3779b97f4a7c15ULL);
  nnet::Nadam opt;
  const std::vector<Var> params = model->Parameters();
  std::vector<Tensor *> values;
  for (const Var &p : params) values.push_back(&p->value);
  std::vector<std::size_t> order(train.size());
  std::iota(order.begin(), order.end(), 0);

  FinetuneResult result;
  HybridModel best = cfg.keep_best ? model->Clone() : HybridModel(cfg.model);
  result.best_dev_accuracy = -1.0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    FinetuneEpoch e;
    e.epoch = epoch;
    const bool off = epoch <= cfg.on_off.off_epochs;
    e.stage = off ? "off" : "on";
    e.schedule_step = off ? epoch - 1 : epoch - 1 - cfg.on_off.off_epochs;
    e.lr = cfg.schedule.Rate(e.schedule_step);
    if (cfg.shuffle) std::shuffle(order.begin(), order.end(), rng.Engine());
    const std::uint64_t draws0 = nnet::DropoutDraws();
    std::int64_t frames = 0;
    std::size_t pos = 0;
    while (pos < order.size()) {
      std::vector<const FinetuneUtterance *> batch;
      long batch_frames = 0;
      while (pos < order.size() && batch_frames < cfg.batch_frames) {
        batch.push_back(&train[order[pos++]]);
        batch_frames += batch.back()->NumFrames();
      }
      const BatchLoss bl = ComputeBatchLoss(*model, batch, cfg, !off, &rng);
      for (const Var &p : params) p->grad = Tensor();
      nnet::Backward(bl.loss.total);
      std::vector<Tensor> zeros;
      zeros.reserve(params.size());
      std::vector<Tensor *> grads;
      for (const Var &p : params) {
        if (p->HasGrad()) {
          grads.push_back(&p->grad);
        } else {
          zeros.emplace_back(p->value.Shape());
          grads.push_back(&zeros.back());
        }
      }
      if (!off && cfg.gradient_noise > 0.0) nnet::AddGradientNoise(grads, cfg.gradient_noise, &rng);
      opt.Step(values, std::vector<const Tensor *>(grads.begin(), grads.end()), e.lr);
      const double w = static_cast<double>(bl.frames);
      e.loss += nnet::ScalarValue(bl.loss.total) * w;
      e.fce += bl.loss.fce * w;
      e.inter += bl.loss.inter * w;
      e.l2 += bl.loss.l2 * w;
      e.masked_cells += bl.masked_cells;
      frames += bl.frames;
    }
    e.loss /= frames;
    e.fce /= frames;
    e.inter /= frames;
    e.l2 /= frames;
    e.dropout_draws = static_cast<std::int64_t>(nnet::DropoutDraws() - draws0);
    e.dev_accuracy = dev.empty() ? 0.0 : FrameAccuracy(*model, dev);
    for (const Var &p : params) p->grad = Tensor();
    if (e.dev_accuracy > result.best_dev_accuracy) {
      result.best_dev_accuracy = e.dev_accuracy;
      result.best_epoch = epoch;
      if (cfg.keep_best) best.CopyValuesFrom(*model);
    }
    result.log.push_back(e);
  }
  if (cfg.keep_best && result.best_epoch > 0) model->CopyValuesFrom(best);
  if (result.best_dev_accuracy < 0.0) result.best_dev_accuracy = 0.0;
  if (!cfg.log_path.empty()) WriteFinetuneLog(cfg.log_path, result.log);
  return result;
}

void WriteFinetuneLog(const std::string &path, const std::vector<FinetuneEpoch> &log) {
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  os << "epoch,stage,schedule_step,lr,loss,fce,inter,l2,dev_frame_acc,masked_cells,dropout_draws\n";
  for (const auto &e : log)
    os << e.epoch << ',' << e.stage << ',' << e.schedule_step << ',' << FormatDouble(e.lr) << ','
       << FormatDouble(e.loss) << ',' << FormatDouble(e.fce) << ',' << FormatDouble(e.inter) << ','
       << FormatDouble(e.l2) << ',' << FormatDouble(e.dev_accuracy) << ',' << e.masked_cells << ','
       << e.dropout_draws << '\n';
}

}  // namespace asrlab

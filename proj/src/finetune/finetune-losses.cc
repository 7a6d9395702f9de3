// finetune/finetune-losses.cc

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

#include "finetune/finetune-losses.h"

#include "base/asr-error.h"
#include "nnet/layers.h"
#include "nnet/ops.h"

namespace asrlab {

std::string InterHeadPrefix(int layer) { return "inter." + std::to_string(layer); }

void IntermediateLossSpec::Validate(int depth) const {
  if (scale < 0.0) ThrowError(ErrorCode::kInvalidArgument, "intermediate scale ", scale);
  if (gamma < 0.0) ThrowError(ErrorCode::kInvalidArgument, "focal gamma ", gamma);
  if (dropout < 0.0 || dropout >= 1.0)
    ThrowError(ErrorCode::kInvalidArgument, "intermediate dropout ", dropout);
  for (int l : layers)
    if (l < 1 || l > depth)
      ThrowError(ErrorCode::kLayerOutOfRange, "intermediate layer ", l, " outside 1..", depth);
}

double IntermediateLossSpec::OutputGamma() const {
  return variant == InterVariant::kIf && focal_output ? gamma : 0.0;
}

KvConfig IntermediateLossSpec::ToKv() const {
  KvConfig kv;
  std::string l;
  for (std::size_t i = 0; i < layers.size(); ++i) l += (i ? "," : "") + std::to_string(layers[i]);
  kv.Set("layers", l);
  kv.Set("scale", scale);
  kv.Set("variant", variant == InterVariant::kIce ? "ice" : "if");
  kv.Set("gamma", gamma);
  kv.Set("dropout", dropout);
  kv.Set("focal_output", focal_output);
  return kv;
}

IntermediateLossSpec IntermediateLossSpec::FromKv(const KvConfig &kv) {
  IntermediateLossSpec s;
  if (kv.Has("layers")) s.layers = kv.GetIntList("layers");
  s.scale = kv.GetDouble("scale", s.scale);
  const std::string v = kv.GetString("variant", "ice");
  if (v == "ice") {
    s.variant = InterVariant::kIce;
  } else if (v == "if") {
    s.variant = InterVariant::kIf;
  } else {
    ThrowError(ErrorCode::kFormatError, "unknown intermediate loss variant '", v, "'");
  }
  s.gamma = kv.GetDouble("gamma", s.gamma);
  s.dropout = kv.GetDouble("dropout", s.dropout);
  s.focal_output = kv.GetBool("focal_output", s.focal_output);
  return s;
}

Var FceLoss(const Var &logits, const std::vector<int> &labels, double gamma) {
  if (logits->value.Rows() != static_cast<int>(labels.size()))
    ThrowError(ErrorCode::kLengthMismatch, "alignment has ", labels.size(), " frames, outputs ",
               logits->value.Rows());
  return nnet::FocalLoss(logits, labels, gamma);
}

Var IntermediateLoss(const nnet::ParameterStore &ps, const std::vector<Var> &hidden,
                     const std::vector<int> &labels, const IntermediateLossSpec &spec, Rng *rng) {
  spec.Validate(static_cast<int>(hidden.size()));
  if (spec.layers.empty()) return nnet::Constant(nnet::Tensor::Scalar(0.0));
  const double gamma = spec.variant == InterVariant::kIf ? spec.gamma : 0.0;
  Var sum;
  for (int layer : spec.layers) {
    Var h = nnet::Dropout(hidden[layer - 1], spec.dropout, rng);
    Var loss = FceLoss(nnet::LinearLayer(ps, InterHeadPrefix(layer), h), labels, gamma);
    sum = sum ? nnet::Add(sum, loss) : loss;
  }
  return nnet::Scale(sum, 1.0 / spec.layers.size());
}

bool IsL2Weight(const nnet::ParamSpec &spec) {
  return spec.role == nnet::ParamRole::kWeight && spec.shape.size() == 2;
}

Var L2Penalty(const std::vector<Var> &weights, double lambda) {
  if (lambda < 0.0) ThrowError(ErrorCode::kInvalidArgument, "L2 lambda ", lambda);
  Var sum;
  for (const Var &w : weights) {
    Var s = nnet::SumSquares(w);
    sum = sum ? nnet::Add(sum, s) : s;
  }
  if (!sum) return nnet::Constant(nnet::Tensor::Scalar(0.0));
  return nnet::Scale(sum, lambda);
}

LossBreakdown CombineLosses(const Var &fce, const Var &inter, double scale, const Var &l2,
                            double lambda) {
  LossBreakdown b;
  b.total = fce;
  b.fce = nnet::ScalarValue(fce);
  if (inter) {
    b.inter = nnet::ScalarValue(inter);
    b.total = nnet::Add(b.total, nnet::Scale(inter, scale));
  }
  if (l2) {
    b.l2 = nnet::ScalarValue(l2);
    b.total = nnet::Add(b.total, nnet::Scale(l2, lambda));
  }
  return b;
}

}  // namespace asrlab

// finetune/finetune-losses.h

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

#ifndef ASRLAB_FINETUNE_FINETUNE_LOSSES_H_
#define ASRLAB_FINETUNE_FINETUNE_LOSSES_H_

#include <string>
#include <vector>

#include "base/kv-config.h"
#include "base/rand.h"
#include "nnet/parameters.h"

namespace asrlab {

using nnet::Var;

/// Parameter prefix of the head attached to a 1-based layer.
std::string InterHeadPrefix(int layer);

enum class InterVariant { kIce, kIf };

struct IntermediateLossSpec {
  std::vector<int> layers;  // 1-based encoder layers; empty disables
  double scale = 0.3;
  InterVariant variant = InterVariant::kIce;
  double gamma = 2.0;    // focal exponent for kIf
  double dropout = 0.1;  // on the hidden state before each head
  /// kIf also swaps the output-head CE for focal loss.
  bool focal_output = true;

  bool Enabled() const { return !layers.empty(); }
  /// Throws LayerOutOfRange for layers outside 1..depth.
  void Validate(int depth) const;
  /// Exponent used by the output head (0 = plain CE).
  double OutputGamma() const;
  KvConfig ToKv() const;
  static IntermediateLossSpec FromKv(const KvConfig &kv);
};

/// Mean over frames of focal loss (gamma = 0: cross-entropy) against one
/// label per frame.  Throws LengthMismatch.
Var FceLoss(const Var &logits, const std::vector<int> &labels, double gamma = 0.0);

/// Mean over the listed layers of the per-layer head loss; `hidden[i]` is
/// the output of layer i + 1 and "inter.<layer>" its linear head.  The
/// caller applies spec.scale.  Throws LayerOutOfRange.
Var IntermediateLoss(const nnet::ParameterStore &ps, const std::vector<Var> &hidden,
                     const std::vector<int> &labels, const IntermediateLossSpec &spec, Rng *rng);

/// Rank-2 weight matrices (linear, attention and LSTM weights); biases,
/// norms, conv kernels and embeddings are excluded.
bool IsL2Weight(const nnet::ParamSpec &spec);

/// lambda * sum ||W||^2 over `weights`.
Var L2Penalty(const std::vector<Var> &weights, double lambda);

struct LossBreakdown {
  Var total;
  double fce = 0.0;
  double inter = 0.0;  // before scaling
  double l2 = 0.0;     // before lambda
};

/// total = fce + scale * inter + lambda * l2; null terms count as zero.
LossBreakdown CombineLosses(const Var &fce, const Var &inter, double scale, const Var &l2,
                            double lambda);

}  // namespace asrlab

#endif  // ASRLAB_FINETUNE_FINETUNE_LOSSES_H_

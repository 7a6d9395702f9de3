// nnet/layers.h

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

#ifndef ASRLAB_NNET_LAYERS_H_
#define ASRLAB_NNET_LAYERS_H_

#include <string>

#include "nnet/ops.h"
#include "nnet/parameters.h"

namespace asrlab::nnet {

// Layout builders append parameters named "<prefix>.<field>"; the matching
// forward functions fetch them back from a store.

void AddLinearSpec(Layout *layout, const std::string &prefix, int din, int dout, bool bias = true);
void AddLayerNormSpec(Layout *layout, const std::string &prefix, int dim);
void AddConvSpec(Layout *layout, const std::string &prefix, int kernel, int cin, int cout,
                 int groups, bool bias);
void AddAttentionSpec(Layout *layout, const std::string &prefix, int dim);
void AddLstmSpec(Layout *layout, const std::string &prefix, int din, int hidden);

Var LinearLayer(const ParameterStore &ps, const std::string &prefix, const Var &x);
Var LayerNormLayer(const ParameterStore &ps, const std::string &prefix, const Var &x);
AttentionParams GetAttention(const ParameterStore &ps, const std::string &prefix);
LstmParams GetLstm(const ParameterStore &ps, const std::string &prefix);

struct TransformerBlockConfig {
  int dim = 0;
  int heads = 1;
  int ff_dim = 0;
  /// LayerNorm before each sub-module (otherwise after the residual sum).
  bool pre_norm = false;
  /// Two half-step feed-forward modules around attention, pre-norm, plus a
  /// final LayerNorm.
  bool macaron = false;
  double dropout = 0.0;
};

void AddTransformerBlockSpec(Layout *layout, const std::string &prefix,
                             const TransformerBlockConfig &cfg);
/// `rng` drives dropout; pass null for inference.
Var TransformerBlock(const ParameterStore &ps, const std::string &prefix,
                     const TransformerBlockConfig &cfg, const Var &x, Rng *rng);

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_LAYERS_H_

// nnet/layers.cc

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

#include "nnet/layers.h"

#include "base/asr-error.h"

namespace asrlab::nnet {

void AddLinearSpec(Layout *layout, const std::string &prefix, int din, int dout, bool bias) {
  layout->push_back({prefix + ".weight", {din, dout}, ParamRole::kWeight, din, dout});
  if (bias) layout->push_back({prefix + ".bias", {dout}, ParamRole::kBias, din, dout});
}

void AddLayerNormSpec(Layout *layout, const std::string &prefix, int dim) {
  layout->push_back({prefix + ".gain", {dim}, ParamRole::kGain, dim, dim});
  layout->push_back({prefix + ".bias", {dim}, ParamRole::kBias, dim, dim});
}

void AddConvSpec(Layout *layout, const std::string &prefix, int kernel, int cin, int cout,
                 int groups, bool bias) {
  ASR_ASSERT(groups >= 1 && cin % groups == 0 && cout % groups == 0);
  const int cin_g = cin / groups;
  layout->push_back({prefix + ".kernel", {kernel, cin_g, cout}, ParamRole::kWeight,
                     kernel * cin_g, kernel * cout / groups});
  if (bias) layout->push_back({prefix + ".bias", {cout}, ParamRole::kBias, 0, 0});
}

void AddAttentionSpec(Layout *layout, const std::string &prefix, int dim) {
  for (const char *p : {"q", "k", "v", "out"}) AddLinearSpec(layout, prefix + "." + p, dim, dim);
}

void AddLstmSpec(Layout *layout, const std::string &prefix, int din, int hidden) {
  layout->push_back({prefix + ".w", {din, 4 * hidden}, ParamRole::kWeight, din, hidden});
  layout->push_back({prefix + ".u", {hidden, 4 * hidden}, ParamRole::kWeight, hidden, hidden});
  layout->push_back({prefix + ".b", {4 * hidden}, ParamRole::kBias, 0, 0});
}

Var LinearLayer(const ParameterStore &ps, const std::string &prefix, const Var &x) {
  return Linear(x, ps.Get(prefix + ".weight"), ps.Find(prefix + ".bias"));
}

Var LayerNormLayer(const ParameterStore &ps, const std::string &prefix, const Var &x) {
  return LayerNorm(x, ps.Get(prefix + ".gain"), ps.Get(prefix + ".bias"));
}

AttentionParams GetAttention(const ParameterStore &ps, const std::string &prefix) {
  AttentionParams p;
  p.wq = ps.Get(prefix + ".q.weight");
  p.bq = ps.Get(prefix + ".q.bias");
  p.wk = ps.Get(prefix + ".k.weight");
  p.bk = ps.Get(prefix + ".k.bias");
  p.wv = ps.Get(prefix + ".v.weight");
  p.bv = ps.Get(prefix + ".v.bias");
  p.wo = ps.Get(prefix + ".out.weight");
  p.bo = ps.Get(prefix + ".out.bias");
  return p;
}

LstmParams GetLstm(const ParameterStore &ps, const std::string &prefix) {
  return {ps.Get(prefix + ".w"), ps.Get(prefix + ".u"), ps.Get(prefix + ".b")};
}

void AddTransformerBlockSpec(Layout *layout, const std::string &prefix,
                             const TransformerBlockConfig &cfg) {
  if (cfg.dim % cfg.heads != 0)
    ThrowError(ErrorCode::kShapeMismatch, "transformer dim ", cfg.dim, " not divisible by ",
               cfg.heads);
  if (cfg.macaron) {
    AddLayerNormSpec(layout, prefix + ".ff1_norm", cfg.dim);
    AddLinearSpec(layout, prefix + ".ff1.in", cfg.dim, cfg.ff_dim);
    AddLinearSpec(layout, prefix + ".ff1.out", cfg.ff_dim, cfg.dim);
  }
  AddLayerNormSpec(layout, prefix + ".attn_norm", cfg.dim);
  AddAttentionSpec(layout, prefix + ".attn", cfg.dim);
  AddLayerNormSpec(layout, prefix + ".ff_norm", cfg.dim);
  AddLinearSpec(layout, prefix + ".ff.in", cfg.dim, cfg.ff_dim);
  AddLinearSpec(layout, prefix + ".ff.out", cfg.ff_dim, cfg.dim);
  if (cfg.macaron) AddLayerNormSpec(layout, prefix + ".final_norm", cfg.dim);
}

namespace {

Var FeedForward(const ParameterStore &ps, const std::string &prefix, const Var &x, double p,
                Rng *rng) {
  Var h = Gelu(LinearLayer(ps, prefix + ".in", x));
  h = Dropout(h, p, rng);
  return Dropout(LinearLayer(ps, prefix + ".out", h), p, rng);
}

}  // namespace

Var TransformerBlock(const ParameterStore &ps, const std::string &prefix,
                     const TransformerBlockConfig &cfg, const Var &x, Rng *rng) {
  const double p = cfg.dropout;
  auto attention = [&](const Var &in) {
    return Dropout(MultiHeadAttention(in, GetAttention(ps, prefix + ".attn"), cfg.heads), p, rng);
  };
  if (cfg.macaron) {
    Var h = Add(x, Scale(FeedForward(ps, prefix + ".ff1", LayerNormLayer(ps, prefix + ".ff1_norm", x), p, rng), 0.5));
    h = Add(h, attention(LayerNormLayer(ps, prefix + ".attn_norm", h)));
    h = Add(h, Scale(FeedForward(ps, prefix + ".ff", LayerNormLayer(ps, prefix + ".ff_norm", h), p, rng), 0.5));
    return LayerNormLayer(ps, prefix + ".final_norm", h);
  }
  if (cfg.pre_norm) {
    Var h = Add(x, attention(LayerNormLayer(ps, prefix + ".attn_norm", x)));
    return Add(h, FeedForward(ps, prefix + ".ff", LayerNormLayer(ps, prefix + ".ff_norm", h), p, rng));
  }
  Var h = LayerNormLayer(ps, prefix + ".attn_norm", Add(x, attention(x)));
  return LayerNormLayer(ps, prefix + ".ff_norm", Add(h, FeedForward(ps, prefix + ".ff", h, p, rng)));
}

}  // namespace asrlab::nnet

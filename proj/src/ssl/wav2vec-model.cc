// ssl/wav2vec-model.cc

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

#include "ssl/wav2vec-model.h"

#include <cmath>
#include <limits>

#include "base/asr-error.h"

namespace asrlab::ssl {

using namespace nnet;

nnet::TransformerBlockConfig BlockConfig(const EncoderConfig &cfg) {
  TransformerBlockConfig b;
  b.dim = cfg.model_dim;
  b.heads = cfg.heads;
  b.ff_dim = cfg.ff_dim;
  b.dropout = cfg.dropout_encoder;
  return b;
}

std::string BlockPrefix(int i) { return "blocks." + std::to_string(i); }

Layout Wav2VecLayout(const EncoderConfig &cfg) {
  cfg.Validate();
  Layout l;
  int cin = 1;
  for (std::size_t i = 0; i < cfg.conv.size(); ++i) {
    const auto &b = cfg.conv[i];
    AddConvSpec(&l, "fe.conv" + std::to_string(i), b.kernel, cin, b.channels, 1, false);
    AddLayerNormSpec(&l, "fe.norm" + std::to_string(i), b.channels);
    cin = b.channels;
  }
  AddLayerNormSpec(&l, "fe.out_norm", cin);
  AddLinearSpec(&l, "proj", cin, cfg.model_dim);
  l.push_back({"mask_emb", {cfg.model_dim}, ParamRole::kEmbedding, 0, 0});
  AddConvSpec(&l, "pos_conv", cfg.pos_conv_kernel, cfg.model_dim, cfg.model_dim,
              cfg.pos_conv_groups, true);
  AddLayerNormSpec(&l, "enc_norm", cfg.model_dim);
  const TransformerBlockConfig bc = BlockConfig(cfg);
  for (int i = 0; i < cfg.layers; ++i) AddTransformerBlockSpec(&l, BlockPrefix(i), bc);
  const QuantizerConfig &q = cfg.quantizer;
  AddLinearSpec(&l, "quant.logits", cin, q.groups * q.entries);
  l.push_back({"quant.codebook", {q.groups * q.entries, q.dim / q.groups}, ParamRole::kEmbedding,
               0, 0});
  AddLinearSpec(&l, "quant.project", q.dim, q.output_dim);
  AddLinearSpec(&l, "final_proj", cfg.model_dim, cfg.final_dim);
  return l;
}

std::int64_t Wav2VecParameterCount(const EncoderConfig &cfg) {
  return CountParameters(Wav2VecLayout(cfg));
}

Wav2VecModel::Wav2VecModel(const EncoderConfig &cfg) : cfg_(cfg), params_(Wav2VecLayout(cfg)) {}

Checkpoint Wav2VecModel::ToCheckpoint() const {
  Checkpoint c = CheckpointFromStore(params_);
  for (const auto &[k, v] : cfg_.ToMap()) c.meta["enc." + k] = v;
  return c;
}

Wav2VecModel Wav2VecModel::FromCheckpoint(const Checkpoint &ckpt) {
  std::map<std::string, std::string> m;
  for (const auto &[k, v] : ckpt.meta)
    if (k.rfind("enc.", 0) == 0) m[k.substr(4)] = v;
  Wav2VecModel model(EncoderConfig::FromMap(m));
  const LoadReport r = LoadParameters(ckpt, &model.params_);
  if (r.missing > 0)
    ThrowError(ErrorCode::kCheckpointShapeMismatch, "checkpoint lacks ", r.missing,
               " model parameters");
  return model;
}

Checkpoint TruncateEncoder(const Checkpoint &ckpt, int keep_blocks) {
  auto it = ckpt.meta.find("enc.layers");
  if (it == ckpt.meta.end()) ThrowError(ErrorCode::kFormatError, "checkpoint has no layer count");
  const int layers = std::stoi(it->second);
  if (keep_blocks < 1 || keep_blocks > layers)
    ThrowError(ErrorCode::kTooFewBlocks, "cannot keep ", keep_blocks, " of ", layers, " blocks");
  Checkpoint out;
  out.meta = ckpt.meta;
  out.meta["enc.layers"] = std::to_string(keep_blocks);
  for (const auto &name : ckpt.names) {
    if (name.rfind("blocks.", 0) == 0) {
      const int b = std::stoi(name.substr(7, name.find('.', 7) - 7));
      if (b >= keep_blocks) continue;
    }
    out.Put(name, ckpt.Get(name));
  }
  return out;
}

Tensor WaveTensor(const std::vector<double> &samples) {
  return Tensor({static_cast<int>(samples.size()), 1}, samples);
}

Var FeatureEncoder(const Wav2VecModel &m, const Var &wave) {
  const EncoderConfig &cfg = m.Config();
  const ParameterStore &ps = m.Params();
  if (cfg.OutputLength(wave->value.Rows()) < 1)
    ThrowError(ErrorCode::kTooShort, "waveform of ", wave->value.Rows(),
               " samples is shorter than the receptive field ", cfg.ReceptiveField());
  Var x = wave;
  for (std::size_t i = 0; i < cfg.conv.size(); ++i) {
    const std::string n = std::to_string(i);
    x = Conv1d(x, ps.Get("fe.conv" + n + ".kernel"), nullptr, cfg.conv[i].stride);
    x = Gelu(LayerNormLayer(ps, "fe.norm" + n, x));
  }
  return x;
}

namespace {

Var PositionalConv(const Wav2VecModel &m, const Var &x) {
  const EncoderConfig &cfg = m.Config();
  const int k = cfg.pos_conv_kernel;
  Var y = Conv1d(x, m.Params().Get("pos_conv.kernel"), m.Params().Get("pos_conv.bias"), 1, k / 2,
                 cfg.pos_conv_groups);
  // even kernels produce one extra frame
  if (y->value.Rows() > x->value.Rows()) y = SliceRows(y, 0, x->value.Rows());
  return Gelu(y);
}

}  // namespace

EncodeOutput Encode(const Wav2VecModel &m, const Var &wave, const EncodeOptions &opts) {
  const EncoderConfig &cfg = m.Config();
  const ParameterStore &ps = m.Params();
  EncodeOutput out;
  out.features = FeatureEncoder(m, wave);
  Var feats = LayerNormLayer(ps, "fe.out_norm", out.features);
  feats = Dropout(feats, cfg.dropout_input, opts.rng);
  out.latent = LinearLayer(ps, "proj", feats);
  Var x = out.latent;
  if (!opts.time_mask.empty()) x = MaskRows(x, opts.time_mask, ps.Get("mask_emb"));
  if (!opts.channel_mask.empty()) {
    if (static_cast<int>(opts.channel_mask.size()) != cfg.model_dim)
      ThrowError(ErrorCode::kShapeMismatch, "channel mask length ", opts.channel_mask.size());
    Tensor keep({1, cfg.model_dim});
    for (int c = 0; c < cfg.model_dim; ++c) keep[c] = opts.channel_mask[c] ? 0.0 : 1.0;
    Tensor ones({x->value.Rows(), 1}, 1.0);
    x = Mul(x, MatMul(Constant(ones), Constant(keep)));
  }
  x = Add(x, PositionalConv(m, x));
  x = LayerNormLayer(ps, "enc_norm", x);
  x = Dropout(x, cfg.dropout_encoder, opts.rng);
  const int blocks = opts.max_blocks < 0 ? cfg.layers : std::min(opts.max_blocks, cfg.layers);
  const TransformerBlockConfig bc = BlockConfig(cfg);
  for (int i = 0; i < blocks; ++i) {
    x = TransformerBlock(ps, BlockPrefix(i), bc, x, opts.rng);
    out.blocks.push_back(x);
  }
  out.context = x;
  return out;
}

QuantizerOutput Quantize(const Wav2VecModel &m, const Var &features, QuantMode mode, double tau,
                         Rng *rng) {
  const QuantizerConfig &qc = m.Config().quantizer;
  const ParameterStore &ps = m.Params();
  if (features->value.Cols() != m.Config().ConvDim())
    ThrowError(ErrorCode::kShapeMismatch, "quantizer input ", features->value.ShapeString());
  if (!(tau > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "temperature must be > 0");
  if (mode == QuantMode::kGumbel && rng == nullptr)
    ThrowError(ErrorCode::kInvalidArgument, "gumbel quantization needs an rng");
  const int frames = features->value.Rows();
  const int g_count = qc.groups, v_count = qc.entries;
  const Var logits = LinearLayer(ps, "quant.logits", features);
  QuantizerOutput out;
  out.indices.assign(frames, std::vector<int>(g_count));
  std::vector<Var> probs, chosen;
  const Var codebook = ps.Get("quant.codebook");
  for (int g = 0; g < g_count; ++g) {
    const Var lg = SliceCols(logits, g * v_count, v_count);
    probs.push_back(Softmax(lg));
    Var soft;
    if (mode == QuantMode::kGumbel) {
      Tensor noise({frames, v_count});
      for (double &v : noise.Data()) {
        const double u = std::max(rng->Uniform(), std::numeric_limits<double>::min());
        v = -std::log(-std::log(u));
      }
      soft = Softmax(Scale(Add(lg, Constant(std::move(noise))), 1.0 / tau));
    } else {
      soft = Softmax(Scale(lg, 1.0 / tau));
    }
    Tensor hard({frames, v_count});
    for (int t = 0; t < frames; ++t) {
      auto row = soft->value.Row(t);
      const int best = static_cast<int>(std::max_element(row.begin(), row.end()) - row.begin());
      hard(t, best) = 1.0;
      out.indices[t][g] = best;
    }
    const Var onehot = StraightThrough(hard, soft);
    chosen.push_back(MatMul(onehot, SliceRows(codebook, g * v_count, v_count)));
  }
  out.probs = g_count == 1 ? probs[0] : ConcatCols(probs);
  out.selected = g_count == 1 ? chosen[0] : ConcatCols(chosen);
  out.q = LinearLayer(ps, "quant.project", out.selected);
  return out;
}

}  // namespace asrlab::ssl

// finetune/hybrid-model.cc

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

#include "finetune/hybrid-model.h"

#include <algorithm>
#include <cmath>

#include "base/asr-error.h"
#include "finetune/finetune-losses.h"
#include "nnet/ops.h"

namespace asrlab {

using nnet::Checkpoint;
using nnet::Constant;
using nnet::Layout;
using nnet::ParameterStore;
using nnet::Tensor;

namespace {

nnet::TransformerBlockConfig MacaronBlock(const TransformerConfig &c) {
  nnet::TransformerBlockConfig b;
  b.dim = c.dim;
  b.heads = c.heads;
  b.ff_dim = c.ff_dim;
  b.macaron = true;
  b.dropout = c.dropout;
  return b;
}

std::string BlstmPrefix(int i) { return "blstm." + std::to_string(i); }
std::string TBlockPrefix(int i) { return "blocks." + std::to_string(i); }

bool IsHeadName(const std::string &name) {
  return name.rfind("head.", 0) == 0 || name.rfind("inter.", 0) == 0;
}

// Quantizer and target projection only serve pre-training.
bool UsedForFinetuning(const std::string &name) {
  return name.rfind("quant.", 0) != 0 && name.rfind("final_proj.", 0) != 0;
}

void CheckDropout(double p) {
  if (p < 0.0 || p >= 1.0) ThrowError(ErrorCode::kInvalidArgument, "dropout ", p);
}

}  // namespace

const char *EncoderKindName(EncoderKind k) {
  switch (k) {
    case EncoderKind::kBlstm:
      return "blstm";
    case EncoderKind::kTransformer:
      return "transformer";
    case EncoderKind::kWav2vec:
      return "wav2vec";
  }
  return "?";
}

EncoderKind ParseEncoderKind(const std::string &name) {
  if (name == "blstm") return EncoderKind::kBlstm;
  if (name == "transformer") return EncoderKind::kTransformer;
  if (name == "wav2vec") return EncoderKind::kWav2vec;
  ThrowError(ErrorCode::kFormatError, "unknown encoder '", name, "'");
}

BlstmConfig BlstmConfig::Toy(int input_dim) {
  BlstmConfig c;
  c.input_dim = input_dim;
  c.layers = 2;
  c.hidden = 16;
  return c;
}

void BlstmConfig::Validate() const {
  if (input_dim < 1 || layers < 1 || hidden < 1)
    ThrowError(ErrorCode::kInvalidArgument, "bad BLSTM config");
  CheckDropout(dropout);
}

KvConfig BlstmConfig::ToKv() const {
  KvConfig kv;
  kv.Set("input_dim", input_dim);
  kv.Set("layers", layers);
  kv.Set("hidden", hidden);
  kv.Set("dropout", dropout);
  return kv;
}

BlstmConfig BlstmConfig::FromKv(const KvConfig &kv) {
  BlstmConfig c;
  c.input_dim = kv.GetInt("input_dim", c.input_dim);
  c.layers = kv.GetInt("layers", c.layers);
  c.hidden = kv.GetInt("hidden", c.hidden);
  c.dropout = kv.GetDouble("dropout", c.dropout);
  c.Validate();
  return c;
}

TransformerConfig TransformerConfig::Toy(int input_dim) {
  TransformerConfig c;
  c.input_dim = input_dim;
  c.dim = 32;
  c.blocks = 2;
  c.heads = 4;
  c.ff_dim = 64;
  return c;
}

void TransformerConfig::Validate() const {
  if (input_dim < 1 || dim < 1 || blocks < 1 || heads < 1 || ff_dim < 1)
    ThrowError(ErrorCode::kInvalidArgument, "bad Transformer config");
  if (dim % heads != 0)
    ThrowError(ErrorCode::kInvalidArgument, "dim ", dim, " not divisible by ", heads, " heads");
  CheckDropout(dropout);
}

KvConfig TransformerConfig::ToKv() const {
  KvConfig kv;
  kv.Set("input_dim", input_dim);
  kv.Set("dim", dim);
  kv.Set("blocks", blocks);
  kv.Set("heads", heads);
  kv.Set("ff_dim", ff_dim);
  kv.Set("dropout", dropout);
  return kv;
}

TransformerConfig TransformerConfig::FromKv(const KvConfig &kv) {
  TransformerConfig c;
  c.input_dim = kv.GetInt("input_dim", c.input_dim);
  c.dim = kv.GetInt("dim", c.dim);
  c.blocks = kv.GetInt("blocks", c.blocks);
  c.heads = kv.GetInt("heads", c.heads);
  c.ff_dim = kv.GetInt("ff_dim", c.ff_dim);
  c.dropout = kv.GetDouble("dropout", c.dropout);
  c.Validate();
  return c;
}

int HybridConfig::EncoderDim() const {
  switch (kind) {
    case EncoderKind::kBlstm:
      return 2 * blstm.hidden;
    case EncoderKind::kTransformer:
      return transformer.dim;
    case EncoderKind::kWav2vec:
      return wav2vec.model_dim;
  }
  return 0;
}

int HybridConfig::EncoderDepth() const {
  switch (kind) {
    case EncoderKind::kBlstm:
      return blstm.layers;
    case EncoderKind::kTransformer:
      return transformer.blocks;
    case EncoderKind::kWav2vec:
      return wav2vec.layers;
  }
  return 0;
}

void HybridConfig::Validate() const {
  if (num_labels < 1) ThrowError(ErrorCode::kInvalidArgument, "num_labels must be >= 1");
  switch (kind) {
    case EncoderKind::kBlstm:
      blstm.Validate();
      break;
    case EncoderKind::kTransformer:
      transformer.Validate();
      break;
    case EncoderKind::kWav2vec:
      wav2vec.Validate();
      break;
  }
  for (int l : intermediate_layers)
    if (l < 1 || l > EncoderDepth())
      ThrowError(ErrorCode::kLayerOutOfRange, "intermediate layer ", l, " outside 1..",
                 EncoderDepth());
}

KvConfig HybridConfig::ToKv() const {
  KvConfig kv;
  kv.Set("encoder", EncoderKindName(kind));
  kv.Set("num_labels", num_labels);
  std::string layers;
  for (std::size_t i = 0; i < intermediate_layers.size(); ++i)
    layers += (i ? "," : "") + std::to_string(intermediate_layers[i]);
  kv.Set("intermediate_layers", layers);
  switch (kind) {
    case EncoderKind::kBlstm:
      kv.Merge(blstm.ToKv(), "blstm");
      break;
    case EncoderKind::kTransformer:
      kv.Merge(transformer.ToKv(), "transformer");
      break;
    case EncoderKind::kWav2vec: {
      KvConfig w(wav2vec.ToMap());
      w.Set("dropout_input", wav2vec.dropout_input);
      w.Set("dropout_encoder", wav2vec.dropout_encoder);
      w.Set("dropout_features", wav2vec.dropout_features);
      kv.Merge(w, "wav2vec");
      break;
    }
  }
  return kv;
}

HybridConfig HybridConfig::FromKv(const KvConfig &kv) {
  HybridConfig c;
  c.kind = ParseEncoderKind(kv.GetString("encoder"));
  c.num_labels = kv.GetInt("num_labels");
  if (kv.Has("intermediate_layers")) c.intermediate_layers = kv.GetIntList("intermediate_layers");
  switch (c.kind) {
    case EncoderKind::kBlstm:
      c.blstm = BlstmConfig::FromKv(kv.Section("blstm"));
      break;
    case EncoderKind::kTransformer:
      c.transformer = TransformerConfig::FromKv(kv.Section("transformer"));
      break;
    case EncoderKind::kWav2vec: {
      const KvConfig w = kv.Section("wav2vec");
      c.wav2vec = ssl::EncoderConfig::FromMap(w.Values());
      c.wav2vec.dropout_input = w.GetDouble("dropout_input", c.wav2vec.dropout_input);
      c.wav2vec.dropout_encoder = w.GetDouble("dropout_encoder", c.wav2vec.dropout_encoder);
      c.wav2vec.dropout_features = w.GetDouble("dropout_features", c.wav2vec.dropout_features);
      break;
    }
  }
  c.Validate();
  return c;
}

Layout BlstmLayout(const BlstmConfig &cfg) {
  Layout l;
  for (int i = 0; i < cfg.layers; ++i) {
    const int din = i == 0 ? cfg.input_dim : 2 * cfg.hidden;
    nnet::AddLstmSpec(&l, BlstmPrefix(i) + ".fwd", din, cfg.hidden);
    nnet::AddLstmSpec(&l, BlstmPrefix(i) + ".bwd", din, cfg.hidden);
  }
  return l;
}

Layout TransformerLayout(const TransformerConfig &cfg) {
  Layout l;
  nnet::AddLinearSpec(&l, "in_proj", cfg.input_dim, cfg.dim);
  for (int i = 0; i < cfg.blocks; ++i)
    nnet::AddTransformerBlockSpec(&l, TBlockPrefix(i), MacaronBlock(cfg));
  return l;
}

std::int64_t BlstmParameterCount(const BlstmConfig &cfg) {
  return nnet::CountParameters(BlstmLayout(cfg));
}

std::int64_t TransformerParameterCount(const TransformerConfig &cfg) {
  return nnet::CountParameters(TransformerLayout(cfg));
}

int FinetuneUtterance::NumFrames() const {
  if (!labels.empty()) return static_cast<int>(labels.size());
  return static_cast<int>(feats.NumRows());
}

namespace {

Layout HybridLayout(const HybridConfig &cfg) {
  Layout l;
  if (cfg.kind == EncoderKind::kBlstm) l = BlstmLayout(cfg.blstm);
  if (cfg.kind == EncoderKind::kTransformer) l = TransformerLayout(cfg.transformer);
  const int dim = cfg.EncoderDim();
  nnet::AddLinearSpec(&l, "head", dim, cfg.num_labels);
  for (int layer : cfg.intermediate_layers)
    nnet::AddLinearSpec(&l, InterHeadPrefix(layer), dim, cfg.num_labels);
  return l;
}

}  // namespace

HybridModel::HybridModel(const HybridConfig &cfg) : cfg_(cfg) {
  cfg_.Validate();
  params_ = ParameterStore(HybridLayout(cfg_));
  if (cfg_.kind == EncoderKind::kWav2vec) w2v_ = std::make_unique<ssl::Wav2VecModel>(cfg_.wav2vec);
}

void HybridModel::Initialize(nnet::InitScheme scheme, Rng *rng) {
  if (w2v_) w2v_->Initialize(scheme, rng);
  params_.Initialize(scheme, rng);
}

nnet::LoadReport HybridModel::LoadEncoder(const Checkpoint &ckpt) {
  nnet::LoadReport r;
  if (w2v_) {
    bool hybrid = false;
    for (const auto &n : ckpt.names) hybrid = hybrid || n.rfind("w2v.", 0) == 0;
    r = nnet::LoadParameters(ckpt, &w2v_->Params(), hybrid ? "w2v." : "");
  } else {
    Checkpoint enc;
    for (const auto &n : ckpt.names)
      if (!IsHeadName(n)) enc.Put(n, ckpt.Get(n));
    ParameterStore view = ParameterStore::Bind(
        [&] {
          Layout l;
          for (const auto &s : params_.Specs())
            if (!IsHeadName(s.name)) l.push_back(s);
          return l;
        }(),
        [&] {
          std::vector<Var> v;
          for (const auto &s : params_.Specs())
            if (!IsHeadName(s.name)) v.push_back(params_.Get(s.name));
          return v;
        }());
    r = nnet::LoadParameters(enc, &view);
  }
  if (r.loaded == 0)
    ThrowError(ErrorCode::kCheckpointShapeMismatch, "checkpoint holds no encoder parameters");
  return r;
}

std::vector<Var> HybridModel::Parameters() const {
  std::vector<Var> out;
  if (w2v_) {
    for (const auto &s : w2v_->Params().Specs())
      if (UsedForFinetuning(s.name)) out.push_back(w2v_->Params().Get(s.name));
  }
  for (const auto &v : params_.Values()) out.push_back(v);
  return out;
}

std::vector<const nnet::ParamSpec *> HybridModel::ParameterSpecs() const {
  std::vector<const nnet::ParamSpec *> out;
  if (w2v_) {
    for (const auto &s : w2v_->Params().Specs())
      if (UsedForFinetuning(s.name)) out.push_back(&s);
  }
  for (const auto &s : params_.Specs()) out.push_back(&s);
  return out;
}

std::int64_t HybridModel::NumParameters() const {
  std::int64_t n = 0;
  for (const auto &v : Parameters()) n += static_cast<std::int64_t>(v->value.Size());
  return n;
}

std::int64_t HybridModel::HeadParameters() const { return nnet::CountParameters(params_.Specs(), "head."); }

Checkpoint HybridModel::ToCheckpoint() const {
  Checkpoint c;
  if (w2v_) {
    for (const auto &s : w2v_->Params().Specs())
      c.Put("w2v." + s.name, w2v_->Params().Get(s.name)->value);
  }
  for (const auto &s : params_.Specs()) c.Put(s.name, params_.Get(s.name)->value);
  const KvConfig kv = cfg_.ToKv();
  for (const auto &[k, v] : kv.Values()) c.meta["hybrid." + k] = v;
  return c;
}

HybridModel HybridModel::FromCheckpoint(const Checkpoint &ckpt) {
  KvConfig kv;
  for (const auto &[k, v] : ckpt.meta)
    if (k.rfind("hybrid.", 0) == 0) kv.Set(k.substr(7), v);
  if (kv.Values().empty()) ThrowError(ErrorCode::kFormatError, "not a hybrid model checkpoint");
  HybridModel m(HybridConfig::FromKv(kv));
  nnet::LoadReport r = nnet::LoadParameters(ckpt, &m.params_);
  if (m.w2v_) {
    const nnet::LoadReport e = nnet::LoadParameters(ckpt, &m.w2v_->Params(), "w2v.");
    r.missing += e.missing;
  }
  if (r.missing > 0)
    ThrowError(ErrorCode::kCheckpointShapeMismatch, "checkpoint lacks ", r.missing, " parameters");
  return m;
}

HybridModel HybridModel::Clone() const {
  HybridModel m(cfg_);
  m.CopyValuesFrom(*this);
  return m;
}

void HybridModel::CopyValuesFrom(const HybridModel &other) {
  const auto src = other.Parameters();
  const auto dst = Parameters();
  if (src.size() != dst.size()) ThrowError(ErrorCode::kShapeMismatch, "model layouts differ");
  for (std::size_t i = 0; i < src.size(); ++i) {
    if (src[i]->value.Shape() != dst[i]->value.Shape())
      ThrowError(ErrorCode::kShapeMismatch, "model layouts differ");
    dst[i]->value = src[i]->value;
  }
  if (w2v_ && other.w2v_) {
    // Pre-training-only tensors travel too so checkpoints stay complete.
    for (const auto &s : w2v_->Params().Specs())
      if (!UsedForFinetuning(s.name))
        w2v_->Params().Get(s.name)->value = other.w2v_->Params().Get(s.name)->value;
  }
}

Tensor SinusoidalPositions(int rows, int dim) {
  Tensor pe({rows, dim});
  for (int t = 0; t < rows; ++t) {
    for (int i = 0; i < dim; ++i) {
      const double rate = std::pow(10000.0, -static_cast<double>(2 * (i / 2)) / dim);
      pe(t, i) = i % 2 == 0 ? std::sin(t * rate) : std::cos(t * rate);
    }
  }
  return pe;
}

namespace {

Tensor MatrixTensor(const Matrix &m) {
  return Tensor({static_cast<int>(m.NumRows()), static_cast<int>(m.NumCols())}, m.Data());
}

std::vector<int> LabelFrameMap(int label_frames, int encoder_frames) {
  if (encoder_frames < 1) ThrowError(ErrorCode::kTooShort, "utterance yields no encoder frames");
  std::vector<int> idx(label_frames);
  for (int t = 0; t < label_frames; ++t) idx[t] = std::min(t, encoder_frames - 1);
  return idx;
}

}  // namespace

int EncoderFrames(const HybridModel &m, const FinetuneUtterance &utt) {
  if (m.Config().kind == EncoderKind::kWav2vec)
    return m.Config().wav2vec.OutputLength(static_cast<long>(utt.samples.size()));
  return static_cast<int>(utt.feats.NumRows());
}

ForwardOutput Forward(const HybridModel &m, const FinetuneUtterance &utt, const ForwardOptions &opts,
                      const Matrix *feats) {
  const HybridConfig &cfg = m.Config();
  const ParameterStore &ps = m.Params();
  const Matrix &x_in = feats ? *feats : utt.feats;
  std::vector<Var> layers;
  switch (cfg.kind) {
    case EncoderKind::kBlstm: {
      if (static_cast<int>(x_in.NumCols()) != cfg.blstm.input_dim)
        ThrowError(ErrorCode::kShapeMismatch, "features have ", x_in.NumCols(), " dims, BLSTM expects ",
                   cfg.blstm.input_dim);
      Var x = Constant(MatrixTensor(x_in));
      for (int i = 0; i < cfg.blstm.layers; ++i) {
        const std::string p = BlstmPrefix(i);
        x = nnet::BlstmLayer(x, nnet::GetLstm(ps, p + ".fwd"), nnet::GetLstm(ps, p + ".bwd"));
        x = nnet::Dropout(x, cfg.blstm.dropout, opts.rng);
        layers.push_back(x);
      }
      break;
    }
    case EncoderKind::kTransformer: {
      const TransformerConfig &tc = cfg.transformer;
      if (static_cast<int>(x_in.NumCols()) != tc.input_dim)
        ThrowError(ErrorCode::kShapeMismatch, "features have ", x_in.NumCols(),
                   " dims, Transformer expects ", tc.input_dim);
      Var x = nnet::LinearLayer(ps, "in_proj", Constant(MatrixTensor(x_in)));
      x = nnet::Add(x, Constant(SinusoidalPositions(static_cast<int>(x_in.NumRows()), tc.dim)));
      x = nnet::Dropout(x, tc.dropout, opts.rng);
      const auto bc = MacaronBlock(tc);
      for (int i = 0; i < tc.blocks; ++i) {
        x = nnet::TransformerBlock(ps, TBlockPrefix(i), bc, x, opts.rng);
        layers.push_back(x);
      }
      break;
    }
    case EncoderKind::kWav2vec: {
      ssl::EncodeOptions eo;
      eo.time_mask = opts.time_mask;
      eo.channel_mask = opts.channel_mask;
      eo.rng = opts.rng;
      const ssl::EncodeOutput enc =
          ssl::Encode(*m.Wav2Vec(), Constant(ssl::WaveTensor(utt.samples)), eo);
      layers = enc.blocks;
      if (layers.empty()) layers.push_back(enc.context);
      break;
    }
  }
  const int enc_frames = layers.back()->value.Rows();
  int frames = utt.NumFrames();
  if (frames == 0) frames = enc_frames;
  const std::vector<int> idx = LabelFrameMap(frames, enc_frames);
  const bool identity = frames == enc_frames;
  auto at_labels = [&](const Var &h) { return identity ? h : nnet::GatherRows(h, idx); };
  ForwardOutput out;
  out.logits = nnet::LinearLayer(ps, "head", at_labels(layers.back()));
  if (opts.intermediate)
    for (const Var &h : layers) out.hidden.push_back(at_labels(h));
  return out;
}

Matrix Posteriors(const HybridModel &m, const FinetuneUtterance &utt) {
  const Var p = nnet::Softmax(Forward(m, utt, {}).logits);
  Matrix out(p->value.Rows(), p->value.Cols());
  out.Data() = p->value.Data();
  return out;
}

}  // namespace asrlab

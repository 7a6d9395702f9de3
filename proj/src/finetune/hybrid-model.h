// finetune/hybrid-model.h

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

#ifndef ASRLAB_FINETUNE_HYBRID_MODEL_H_
#define ASRLAB_FINETUNE_HYBRID_MODEL_H_

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "base/kv-config.h"
#include "base/matrix.h"
#include "base/rand.h"
#include "nnet/checkpoint.h"
#include "nnet/layers.h"
#include "ssl/wav2vec-model.h"

namespace asrlab {

using nnet::Var;

enum class EncoderKind { kBlstm, kTransformer, kWav2vec };

const char *EncoderKindName(EncoderKind k);
EncoderKind ParseEncoderKind(const std::string &name);

struct BlstmConfig {
  int input_dim = 40;
  int layers = 5;
  int hidden = 512;  // per direction
  double dropout = 0.1;

  static BlstmConfig Full() { return {}; }
  static BlstmConfig Toy(int input_dim);
  void Validate() const;
  KvConfig ToKv() const;
  static BlstmConfig FromKv(const KvConfig &kv);
};

/// Macaron blocks over a linear input projection plus sinusoidal positions.
struct TransformerConfig {
  int input_dim = 40;
  int dim = 768;
  int blocks = 12;
  int heads = 12;
  int ff_dim = 1536;
  double dropout = 0.1;

  static TransformerConfig Full() { return {}; }
  static TransformerConfig Toy(int input_dim);
  void Validate() const;
  KvConfig ToKv() const;
  static TransformerConfig FromKv(const KvConfig &kv);
};

struct HybridConfig {
  EncoderKind kind = EncoderKind::kTransformer;
  BlstmConfig blstm;
  TransformerConfig transformer;
  ssl::EncoderConfig wav2vec = ssl::ToyConfig();
  int num_labels = 0;
  /// 1-based encoder layers that carry an intermediate classification head.
  std::vector<int> intermediate_layers;

  int EncoderDim() const;
  int EncoderDepth() const;
  void Validate() const;
  KvConfig ToKv() const;
  static HybridConfig FromKv(const KvConfig &kv);
};

/// Parameter layout of a supervised baseline encoder (no heads).
nnet::Layout BlstmLayout(const BlstmConfig &cfg);
nnet::Layout TransformerLayout(const TransformerConfig &cfg);
std::int64_t BlstmParameterCount(const BlstmConfig &cfg);
std::int64_t TransformerParameterCount(const TransformerConfig &cfg);

/// One utterance of supervised data.  `feats` feed the baseline encoders
/// (rows = label frames); `samples` are the normalized waveform for the
/// wav2vec encoder.  `labels` hold one tied-state id per frame.
struct FinetuneUtterance {
  std::string id;
  Matrix feats;
  std::vector<double> samples;
  std::vector<int> labels;

  /// Label frames: labels, else feature rows.
  int NumFrames() const;
};

/// Encoder plus a linear softmax output head ("head") and optional
/// intermediate heads ("inter.<layer>").
class HybridModel {
 public:
  explicit HybridModel(const HybridConfig &cfg);

  const HybridConfig &Config() const { return cfg_; }
  /// Baseline encoder and all heads.
  nnet::ParameterStore &Params() { return params_; }
  const nnet::ParameterStore &Params() const { return params_; }
  /// Null unless the encoder is wav2vec.
  ssl::Wav2VecModel *Wav2Vec() { return w2v_.get(); }
  const ssl::Wav2VecModel *Wav2Vec() const { return w2v_.get(); }

  void Initialize(nnet::InitScheme scheme, Rng *rng);
  /// Copies encoder weights from a checkpoint (a wav2vec pre-training
  /// checkpoint or a baseline encoder); heads stay as they are.  Throws
  /// CheckpointShapeMismatch on mismatching shapes or when no encoder
  /// parameter is found.
  nnet::LoadReport LoadEncoder(const nnet::Checkpoint &ckpt);

  /// Every trainable leaf, encoder first.
  std::vector<Var> Parameters() const;
  std::vector<const nnet::ParamSpec *> ParameterSpecs() const;
  std::int64_t NumParameters() const;
  std::int64_t HeadParameters() const;

  nnet::Checkpoint ToCheckpoint() const;
  static HybridModel FromCheckpoint(const nnet::Checkpoint &ckpt);
  /// Deep copy of all parameter values.
  HybridModel Clone() const;
  void CopyValuesFrom(const HybridModel &other);

 private:
  HybridConfig cfg_;
  nnet::ParameterStore params_;
  std::unique_ptr<ssl::Wav2VecModel> w2v_;
};

struct ForwardOptions {
  /// Dropout source; null disables every dropout.
  Rng *rng = nullptr;
  /// wav2vec only: masked encoder frames / channels (empty = none).
  std::vector<bool> time_mask;
  std::vector<bool> channel_mask;
  bool intermediate = false;
};

struct ForwardOutput {
  Var logits;               // [frames, labels]
  std::vector<Var> hidden;  // every encoder layer output at label frames
};

/// Encoder frames are mapped to label frames by index (clamped at the last
/// encoder frame).  `feats` overrides utt.feats when given.
ForwardOutput Forward(const HybridModel &m, const FinetuneUtterance &utt,
                      const ForwardOptions &opts, const Matrix *feats = nullptr);

/// Encoder frame count before label mapping.
int EncoderFrames(const HybridModel &m, const FinetuneUtterance &utt);

/// Softmax posteriors [frames, labels] of the output head, no dropout.
Matrix Posteriors(const HybridModel &m, const FinetuneUtterance &utt);

/// Sinusoidal position table [rows, dim].
nnet::Tensor SinusoidalPositions(int rows, int dim);

}  // namespace asrlab

#endif  // ASRLAB_FINETUNE_HYBRID_MODEL_H_

// ssl/wav2vec-model.h

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

#ifndef ASRLAB_SSL_WAV2VEC_MODEL_H_
#define ASRLAB_SSL_WAV2VEC_MODEL_H_

#include <string>
#include <vector>

#include "base/rand.h"
#include "nnet/checkpoint.h"
#include "nnet/layers.h"
#include "ssl/encoder-config.h"

namespace asrlab::ssl {

using nnet::Tensor;
using nnet::Var;

/// Parameter layout of the whole model (feature encoder, context network,
/// quantizer, final projection).
nnet::Layout Wav2VecLayout(const EncoderConfig &cfg);
/// Count without allocation.
std::int64_t Wav2VecParameterCount(const EncoderConfig &cfg);

nnet::TransformerBlockConfig BlockConfig(const EncoderConfig &cfg);
std::string BlockPrefix(int i);

class Wav2VecModel {
 public:
  explicit Wav2VecModel(const EncoderConfig &cfg);

  const EncoderConfig &Config() const { return cfg_; }
  nnet::ParameterStore &Params() { return params_; }
  const nnet::ParameterStore &Params() const { return params_; }

  void Initialize(nnet::InitScheme scheme, Rng *rng) { params_.Initialize(scheme, rng); }

  /// Parameters + config in one checkpoint (config under meta "enc.*").
  nnet::Checkpoint ToCheckpoint() const;
  /// Builds a model from a checkpoint written by ToCheckpoint.
  static Wav2VecModel FromCheckpoint(const nnet::Checkpoint &ckpt);

 private:
  EncoderConfig cfg_;
  nnet::ParameterStore params_;
};

/// waveform [N, 1] -> conv features [T', C]; each block is
/// conv -> LayerNorm -> GELU.  Throws TooShort.
Var FeatureEncoder(const Wav2VecModel &m, const Var &wave);

struct EncodeOptions {
  /// Rows replaced by the learned mask embedding (empty: none).
  std::vector<bool> time_mask;
  /// Latent channels zeroed (fine-tune channel masking; empty: none).
  std::vector<bool> channel_mask;
  /// Dropout RNG; null disables dropout.
  Rng *rng = nullptr;
  /// Blocks to run (<0: all).
  int max_blocks = -1;
};

struct EncodeOutput {
  Var features;  // conv features [T, C]
  Var latent;    // projected, unmasked [T, d]
  std::vector<Var> blocks;  // output of every executed block
  Var context;   // last block output (or the input to block 0)
};

EncodeOutput Encode(const Wav2VecModel &m, const Var &wave, const EncodeOptions &opts);

enum class QuantMode { kHard, kGumbel };

struct QuantizerOutput {
  Var q;              // [T, f]
  Var selected;       // concatenated entries before projection [T, dim]
  Var probs;          // softmax of codebook logits [T, G*V]
  std::vector<std::vector<int>> indices;  // [T][G]
};

/// Per codebook: hard argmax of the logits, or argmax of a Gumbel-perturbed
/// softmax at temperature tau; the forward uses the one-hot choice and the
/// gradient flows through the soft probabilities.
QuantizerOutput Quantize(const Wav2VecModel &m, const Var &features, QuantMode mode, double tau,
                         Rng *rng);

/// Drops transformer blocks >= keep_blocks; every other tensor is copied
/// unchanged.  Throws TooFewBlocks when the checkpoint has fewer blocks.
nnet::Checkpoint TruncateEncoder(const nnet::Checkpoint &ckpt, int keep_blocks);

/// Converts a waveform into a [N, 1] tensor.
Tensor WaveTensor(const std::vector<double> &samples);

}  // namespace asrlab::ssl

#endif  // ASRLAB_SSL_WAV2VEC_MODEL_H_

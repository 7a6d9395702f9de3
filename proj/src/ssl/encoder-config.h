// ssl/encoder-config.h

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

#ifndef ASRLAB_SSL_ENCODER_CONFIG_H_
#define ASRLAB_SSL_ENCODER_CONFIG_H_

#include <map>
#include <string>
#include <vector>

namespace asrlab::ssl {

struct ConvBlockConfig {
  int channels = 0;
  int kernel = 0;
  int stride = 1;
};

struct QuantizerConfig {
  int groups = 2;        // G
  int entries = 320;     // V per codebook
  int dim = 256;         // concatenated entry dim; each entry has dim / G
  int output_dim = 256;  // f
};

/// Feature encoder + context network + quantizer of a wav2vec-2.0 style
/// model.
struct EncoderConfig {
  std::string name = "toy";
  double sample_rate = 8000.0;
  std::vector<ConvBlockConfig> conv;
  int model_dim = 32;
  int layers = 2;
  int heads = 4;
  int ff_dim = 64;
  int pos_conv_kernel = 8;
  int pos_conv_groups = 2;
  QuantizerConfig quantizer;
  int final_dim = 16;
  /// Dropout on the conv features, inside each block, and on the latents
  /// fed to the quantizer.
  double dropout_input = 0.0;
  double dropout_encoder = 0.0;
  double dropout_features = 0.0;

  int TotalStride() const;
  int ReceptiveField() const;
  /// Frames produced from `samples` inputs; 0 when shorter than the
  /// receptive field.
  int OutputLength(int samples) const;
  double FrameSeconds() const { return TotalStride() / sample_rate; }
  int ConvDim() const { return conv.empty() ? 0 : conv.back().channels; }

  /// Throws InvalidArgument on inconsistent sizes.
  void Validate() const;

  std::map<std::string, std::string> ToMap() const;
  static EncoderConfig FromMap(const std::map<std::string, std::string> &m);
};

/// 7 x 512-channel blocks with strides (5,2,2,2,2,2,2), kernels
/// (10,3,3,3,3,2,2) at 16 kHz, and the Base / Large context networks.
EncoderConfig BaseConfig();
EncoderConfig LargeConfig();
/// Large stopped after the 8th transformer block.
EncoderConfig Large8Config();
/// Small 8 kHz model: strides (5,4,4) = 10 ms frames.
EncoderConfig ToyConfig();

/// Halves the stride of conv block `layer` (the first block with an even
/// stride when layer < 0) and halves the sample rate, so the frame duration
/// is unchanged.  Throws OddStride.
EncoderConfig HalveOneStride(const EncoderConfig &cfg, int layer = -1);

}  // namespace asrlab::ssl

#endif  // ASRLAB_SSL_ENCODER_CONFIG_H_

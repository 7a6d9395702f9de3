// feat/feature-gammatone.h

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

#ifndef ASRLAB_FEAT_FEATURE_GAMMATONE_H_
#define ASRLAB_FEAT_FEATURE_GAMMATONE_H_

#include <span>
#include <vector>

#include "base/matrix.h"
#include "feat/feature-matrix.h"
#include "feat/wave.h"

namespace asrlab {

enum class Compression { kTenthRoot, kLog };

struct GammatoneConfig {
  std::size_t n_channels = 72;
  double fmin_hz = 100.0;
  double fmax_hz = 0.0;  // <= 0 means 0.95 * Nyquist
  double preemph_coeff = 0.97;
  double window_ms = 25.0;
  double shift_ms = 10.0;
  std::size_t spectral_window = 9;
  std::size_t spectral_shift = 4;
  Compression compression = Compression::kTenthRoot;
  std::size_t n_ceps = 16;
  bool normalize = true;  // per-utterance mean/variance normalization

  std::size_t NumBands() const;
  void Validate(double sample_rate) const;
};

/// Center frequencies placed uniformly along the cochlea with the human
/// Greenwood map f(x) = 165.4 (10^(2.1 x) - 0.88), ascending.
std::vector<double> GreenwoodCenters(std::size_t n_channels, double fmin_hz,
                                     double fmax_hz);

/// Output of one 4th-order gammatone channel (cascade of four complex
/// one-pole sections around the center frequency; unit gain at fc).
std::vector<double> GammatoneFilter(std::span<const double> x, double sample_rate,
                                    double center_hz);

/// Hanning-weighted temporal integration of |filter output| per channel:
/// T x n_channels, before spectral integration.
Matrix GammatoneChannelEnergies(const AudioSegment &seg, const GammatoneConfig &cfg);

/// Full pipeline: channel energies -> spectral integration -> compression ->
/// DCT to n_ceps -> optional mean/variance normalization.
FeatureMatrix GammatoneFeatures(const AudioSegment &seg, const GammatoneConfig &cfg);

}  // namespace asrlab

#endif  // ASRLAB_FEAT_FEATURE_GAMMATONE_H_

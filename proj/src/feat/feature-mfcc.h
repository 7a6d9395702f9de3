// feat/feature-mfcc.h

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

#ifndef ASRLAB_FEAT_FEATURE_MFCC_H_
#define ASRLAB_FEAT_FEATURE_MFCC_H_

#include <cmath>

#include "base/matrix.h"
#include "feat/feature-matrix.h"
#include "feat/feature-window.h"
#include "feat/wave.h"

namespace asrlab {

inline double HzToMel(double hz) { return 2595.0 * std::log10(1.0 + hz / 700.0); }
inline double MelToHz(double mel) { return 700.0 * (std::pow(10.0, mel / 2595.0) - 1.0); }

/// Triangular filters with centers spaced uniformly on the Mel scale; the
/// triangles are linear in Mel.  Weights() is num_filters x (n_fft/2+1).
class MelFilterbank {
 public:
  MelFilterbank(std::size_t num_filters, std::size_t n_fft, double sample_rate,
                double fmin_hz, double fmax_hz);

  const Matrix &Weights() const { return weights_; }
  std::size_t NumFilters() const { return weights_.NumRows(); }

  /// T x num_filters energies from a T x num_bins magnitude spectrum.
  Matrix Apply(const Matrix &spectrum) const;

 private:
  Matrix weights_;
};

Matrix MelFilterbankEnergies(const Matrix &spectrum, std::size_t num_filters,
                             double fmin_hz, double fmax_hz, double sample_rate);

struct MfccConfig {
  double preemph_coeff = 0.97;
  double frame_len_ms = 25.0;
  double frame_shift_ms = 10.0;
  std::size_t n_fft = 512;
  std::size_t n_mel_filters = 40;
  std::size_t n_ceps = 13;
  bool add_deltas = true;
  double fmin_hz = 20.0;
  double fmax_hz = 0.0;  // <= 0 means Nyquist
  WindowType window = WindowType::kHamming;
  double log_floor = 1e-10;

  void Validate(double sample_rate) const;
};

/// pre-emphasis -> framing/window -> |DFT| -> Mel -> log(x + floor) ->
/// orthonormal DCT-II -> optional deltas and delta-deltas.
FeatureMatrix Mfcc(const AudioSegment &seg, const MfccConfig &cfg);

}  // namespace asrlab

#endif  // ASRLAB_FEAT_FEATURE_MFCC_H_

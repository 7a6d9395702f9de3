// feat/feature-window.h

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

#ifndef ASRLAB_FEAT_FEATURE_WINDOW_H_
#define ASRLAB_FEAT_FEATURE_WINDOW_H_

#include <span>
#include <vector>

#include "base/matrix.h"

namespace asrlab {

enum class WindowType { kHann, kHamming, kRect };

/// y[0] = x[0], y[t] = x[t] - coeff * x[t-1].
std::vector<double> PreEmphasize(std::span<const double> samples, double coeff);

/// Number of complete frames: 1 + floor((N - L) / S) when N >= L, else 0.
std::size_t NumFrames(std::size_t num_samples, std::size_t frame_len,
                      std::size_t frame_shift);

/// Frame length/shift in samples for a duration in ms at the given rate.
std::size_t MsToSamples(double ms, double sample_rate);

std::vector<double> MakeWindow(WindowType type, std::size_t length);

/// Splits the signal into frames of frame_len_ms every shift_ms and multiplies
/// each by the window.  Returns a NumFrames x L matrix.
Matrix FrameAndWindow(std::span<const double> samples, double sample_rate,
                      double frame_len_ms, double shift_ms, WindowType window);

/// One-sided DFT magnitude |X[k]|, k = 0..n_fft/2, of each zero-padded frame.
/// The DFT is unnormalized, X[k] = sum_n x[n] exp(-2 pi i k n / n_fft), so
/// Parseval reads |X[0]|^2 + 2 sum_{0<k<n/2} |X[k]|^2 + |X[n/2]|^2
///   = n_fft * sum_n x[n]^2.
Matrix MagnitudeSpectrum(const Matrix &frames, std::size_t n_fft);

/// Orthonormal DCT-II basis, num_out x num_in; row k is
/// sqrt(2/N) cos(pi k (2n+1) / 2N), with row 0 scaled by sqrt(1/N).
Matrix DctMatrix(std::size_t num_out, std::size_t num_in);

/// out[t] = dct * in[t] for each row.
Matrix ApplyRowTransform(const Matrix &in, const Matrix &transform);

/// Regression deltas over a +-window frame span with edge replication.
Matrix ComputeDeltas(const Matrix &feats, int window = 2);

}  // namespace asrlab

#endif  // ASRLAB_FEAT_FEATURE_WINDOW_H_

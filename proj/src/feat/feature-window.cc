// feat/feature-window.cc

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

#include "feat/feature-window.h"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <numbers>

#include "base/asr-error.h"

namespace asrlab {

std::vector<double> PreEmphasize(std::span<const double> samples, double coeff) {
  if (coeff < 0.0 || coeff > 1.0)
    ThrowError(ErrorCode::kInvalidArgument, "pre-emphasis coefficient ", coeff);
  std::vector<double> out(samples.begin(), samples.end());
  for (std::size_t t = samples.size(); t-- > 1;)
    out[t] = samples[t] - coeff * samples[t - 1];
  return out;
}

std::size_t NumFrames(std::size_t num_samples, std::size_t frame_len,
                      std::size_t frame_shift) {
  if (frame_len == 0 || frame_shift == 0)
    ThrowError(ErrorCode::kInvalidArgument, "frame length and shift must be > 0");
  if (num_samples < frame_len) return 0;
  return 1 + (num_samples - frame_len) / frame_shift;
}

std::size_t MsToSamples(double ms, double sample_rate) {
  return static_cast<std::size_t>(std::lround(ms * 1e-3 * sample_rate));
}

std::vector<double> MakeWindow(WindowType type, std::size_t length) {
  std::vector<double> w(length, 1.0);
  if (length < 2 || type == WindowType::kRect) return w;
  const double denom = static_cast<double>(length - 1);
  for (std::size_t n = 0; n < length; ++n) {
    const double c = std::cos(2.0 * std::numbers::pi * n / denom);
    w[n] = type == WindowType::kHann ? 0.5 - 0.5 * c : 0.54 - 0.46 * c;
  }
  return w;
}

Matrix FrameAndWindow(std::span<const double> samples, double sample_rate,
                      double frame_len_ms, double shift_ms, WindowType window) {
  const std::size_t len = MsToSamples(frame_len_ms, sample_rate);
  const std::size_t shift = MsToSamples(shift_ms, sample_rate);
  if (len < shift)
    ThrowError(ErrorCode::kInvalidArgument, "frame length ", len,
               " shorter than shift ", shift);
  const std::size_t num_frames = NumFrames(samples.size(), len, shift);
  const auto w = MakeWindow(window, len);
  Matrix frames(num_frames, len);
  for (std::size_t t = 0; t < num_frames; ++t) {
    auto row = frames.Row(t);
    for (std::size_t n = 0; n < len; ++n) row[n] = samples[t * shift + n] * w[n];
  }
  return frames;
}

namespace {

// FFTW planning is not thread-safe; execution with the new-array interface is.
std::mutex fftw_plan_mutex;

}  // namespace

Matrix MagnitudeSpectrum(const Matrix &frames, std::size_t n_fft) {
  if (n_fft == 0 || (n_fft & (n_fft - 1)) != 0)
    ThrowError(ErrorCode::kInvalidArgument, "n_fft must be a power of two, got ", n_fft);
  if (frames.NumCols() > n_fft)
    ThrowError(ErrorCode::kInvalidArgument, "frame length ", frames.NumCols(),
               " exceeds n_fft ", n_fft);
  const std::size_t num_bins = n_fft / 2 + 1;
  Matrix out(frames.NumRows(), num_bins);
  if (frames.NumRows() == 0) return out;

  double *in = fftw_alloc_real(n_fft);
  fftw_complex *spec = fftw_alloc_complex(num_bins);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(n_fft), in, spec, FFTW_ESTIMATE);
  }
  for (std::size_t t = 0; t < frames.NumRows(); ++t) {
    auto row = frames.Row(t);
    std::fill(in, in + n_fft, 0.0);
    std::copy(row.begin(), row.end(), in);
    fftw_execute_dft_r2c(plan, in, spec);
    for (std::size_t k = 0; k < num_bins; ++k)
      out(t, k) = std::hypot(spec[k][0], spec[k][1]);
  }
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(spec);
  fftw_free(in);
  return out;
}

Matrix DctMatrix(std::size_t num_out, std::size_t num_in) {
  if (num_out > num_in)
    ThrowError(ErrorCode::kInvalidArgument, "DCT output dim ", num_out,
               " exceeds input dim ", num_in);
  Matrix dct(num_out, num_in);
  const double n = static_cast<double>(num_in);
  for (std::size_t k = 0; k < num_out; ++k) {
    const double scale = k == 0 ? std::sqrt(1.0 / n) : std::sqrt(2.0 / n);
    for (std::size_t i = 0; i < num_in; ++i)
      dct(k, i) = scale * std::cos(std::numbers::pi * k * (2.0 * i + 1.0) / (2.0 * n));
  }
  return dct;
}

Matrix ApplyRowTransform(const Matrix &in, const Matrix &transform) {
  if (in.NumCols() != transform.NumCols())
    ThrowError(ErrorCode::kDimensionMismatch, "transform expects ",
               transform.NumCols(), " columns, got ", in.NumCols());
  Matrix out(in.NumRows(), transform.NumRows());
  for (std::size_t t = 0; t < in.NumRows(); ++t) {
    auto x = in.Row(t);
    for (std::size_t k = 0; k < transform.NumRows(); ++k) {
      auto w = transform.Row(k);
      double s = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
      out(t, k) = s;
    }
  }
  return out;
}

Matrix ComputeDeltas(const Matrix &feats, int window) {
  const auto num_frames = static_cast<long>(feats.NumRows());
  Matrix out(feats.NumRows(), feats.NumCols());
  if (num_frames == 0) return out;
  double norm = 0.0;
  for (int n = 1; n <= window; ++n) norm += 2.0 * n * n;
  for (long t = 0; t < num_frames; ++t) {
    for (int n = 1; n <= window; ++n) {
      const long next = std::min(t + n, num_frames - 1);
      const long prev = std::max(t - n, 0L);
      for (std::size_t d = 0; d < feats.NumCols(); ++d)
        out(t, d) += n * (feats(next, d) - feats(prev, d));
    }
    for (std::size_t d = 0; d < feats.NumCols(); ++d) out(t, d) /= norm;
  }
  return out;
}

}  // namespace asrlab

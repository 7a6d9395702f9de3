// feat/feature-gammatone.cc

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

#include "feat/feature-gammatone.h"

#include <cmath>
#include <complex>
#include <numbers>

#include "base/asr-error.h"
#include "feat/feature-window.h"

namespace asrlab {

namespace {

constexpr double kGreenwoodA = 165.4;
constexpr double kGreenwoodAlpha = 2.1;
constexpr double kGreenwoodK = 0.88;

double GreenwoodPosition(double hz) {
  return std::log10(hz / kGreenwoodA + kGreenwoodK) / kGreenwoodAlpha;
}

double GreenwoodFrequency(double x) {
  return kGreenwoodA * (std::pow(10.0, kGreenwoodAlpha * x) - kGreenwoodK);
}

double FmaxFor(const GammatoneConfig &cfg, double sample_rate) {
  return cfg.fmax_hz > 0 ? cfg.fmax_hz : 0.95 * sample_rate / 2.0;
}

}  // namespace

std::size_t GammatoneConfig::NumBands() const {
  if (n_channels < spectral_window) return 0;
  return 1 + (n_channels - spectral_window) / spectral_shift;
}

void GammatoneConfig::Validate(double sample_rate) const {
  if (spectral_shift == 0 || spectral_window == 0)
    ThrowError(ErrorCode::kInvalidArgument, "spectral window/shift must be > 0");
  if (n_ceps > NumBands())
    ThrowError(ErrorCode::kInvalidArgument, "n_ceps ", n_ceps, " exceeds ",
               NumBands(), " integrated bands");
  if (!(fmin_hz > 0 && fmin_hz < FmaxFor(*this, sample_rate) &&
        FmaxFor(*this, sample_rate) <= sample_rate / 2))
    ThrowError(ErrorCode::kInvalidArgument, "gammatone frequency range invalid");
  if (shift_ms > window_ms)
    ThrowError(ErrorCode::kInvalidArgument, "shift exceeds window");
}

std::vector<double> GreenwoodCenters(std::size_t n_channels, double fmin_hz,
                                     double fmax_hz) {
  std::vector<double> centers(n_channels);
  const double lo = GreenwoodPosition(fmin_hz), hi = GreenwoodPosition(fmax_hz);
  for (std::size_t c = 0; c < n_channels; ++c) {
    const double x = n_channels == 1 ? lo : lo + (hi - lo) * c / (n_channels - 1.0);
    centers[c] = GreenwoodFrequency(x);
  }
  return centers;
}

std::vector<double> GammatoneFilter(std::span<const double> x, double sample_rate,
                                    double center_hz) {
  using cd = std::complex<double>;
  const double erb = 24.7 + 0.108 * center_hz;
  const double a = std::exp(-2.0 * std::numbers::pi * 1.019 * erb / sample_rate);
  const double omega = 2.0 * std::numbers::pi * center_hz / sample_rate;
  cd state[4] = {};
  std::vector<double> out(x.size());
  for (std::size_t n = 0; n < x.size(); ++n) {
    const cd rot = std::polar(1.0, omega * static_cast<double>(n));
    cd u = x[n] * std::conj(rot);
    for (cd &s : state) {
      s = (1.0 - a) * u + a * s;
      u = s;
    }
    // demodulated tone has amplitude A/2; the factor 2 restores unit gain
    out[n] = 2.0 * std::real(u * rot);
  }
  return out;
}

Matrix GammatoneChannelEnergies(const AudioSegment &seg, const GammatoneConfig &cfg) {
  ValidateAudio(seg);
  cfg.Validate(seg.sample_rate);
  const std::size_t len = MsToSamples(cfg.window_ms, seg.sample_rate);
  const std::size_t shift = MsToSamples(cfg.shift_ms, seg.sample_rate);
  const std::size_t num_frames = NumFrames(seg.samples.size(), len, shift);
  if (num_frames == 0) ThrowError(ErrorCode::kEmptyAudio, "no complete frame in ", seg.id);

  const auto emphasized = PreEmphasize(seg.samples, cfg.preemph_coeff);
  const auto centers =
      GreenwoodCenters(cfg.n_channels, cfg.fmin_hz, FmaxFor(cfg, seg.sample_rate));
  const auto window = MakeWindow(WindowType::kHann, len);
  double window_sum = 0.0;
  for (double w : window) window_sum += w;

  Matrix energies(num_frames, cfg.n_channels);
  for (std::size_t c = 0; c < cfg.n_channels; ++c) {
    const auto y = GammatoneFilter(emphasized, seg.sample_rate, centers[c]);
    for (std::size_t t = 0; t < num_frames; ++t) {
      double acc = 0.0;
      for (std::size_t n = 0; n < len; ++n) acc += window[n] * std::abs(y[t * shift + n]);
      energies(t, c) = acc / window_sum;
    }
  }
  return energies;
}

FeatureMatrix GammatoneFeatures(const AudioSegment &seg, const GammatoneConfig &cfg) {
  const Matrix energies = GammatoneChannelEnergies(seg, cfg);
  const std::size_t num_frames = energies.NumRows();
  const std::size_t bands = cfg.NumBands();

  Matrix integrated(num_frames, bands);
  for (std::size_t t = 0; t < num_frames; ++t)
    for (std::size_t b = 0; b < bands; ++b) {
      double acc = 0.0;
      for (std::size_t k = 0; k < cfg.spectral_window; ++k)
        acc += energies(t, b * cfg.spectral_shift + k);
      const double v = acc / cfg.spectral_window;
      integrated(t, b) = cfg.compression == Compression::kTenthRoot
                             ? std::pow(v, 0.1)
                             : std::log(v + 1e-10);
    }

  FeatureMatrix out;
  out.frame_len_ms = cfg.window_ms;
  out.frame_shift_ms = cfg.shift_ms;
  out.frames = ApplyRowTransform(integrated, DctMatrix(cfg.n_ceps, bands));
  if (!cfg.normalize) return out;

  for (std::size_t d = 0; d < cfg.n_ceps; ++d) {
    double mean = 0.0, var = 0.0;
    for (std::size_t t = 0; t < num_frames; ++t) mean += out.frames(t, d);
    mean /= num_frames;
    for (std::size_t t = 0; t < num_frames; ++t) {
      const double c = out.frames(t, d) - mean;
      var += c * c;
    }
    var /= num_frames;
    const double scale = var > 1e-20 ? 1.0 / std::sqrt(var) : 1.0;
    for (std::size_t t = 0; t < num_frames; ++t)
      out.frames(t, d) = (out.frames(t, d) - mean) * scale;
  }
  return out;
}

}  // namespace asrlab

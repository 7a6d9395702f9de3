// feat/feature-mfcc.cc

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

#include "feat/feature-mfcc.h"

#include <algorithm>
#include <cmath>

#include "base/asr-error.h"

namespace asrlab {

MelFilterbank::MelFilterbank(std::size_t num_filters, std::size_t n_fft,
                             double sample_rate, double fmin_hz, double fmax_hz) {
  if (!(fmin_hz >= 0 && fmin_hz < fmax_hz && fmax_hz <= sample_rate / 2.0))
    ThrowError(ErrorCode::kInvalidArgument, "mel range [", fmin_hz, ", ", fmax_hz,
               "] invalid for rate ", sample_rate);
  if (num_filters == 0)
    ThrowError(ErrorCode::kInvalidArgument, "need at least one mel filter");
  const std::size_t num_bins = n_fft / 2 + 1;
  weights_.Resize(num_filters, num_bins);
  const double mel_lo = HzToMel(fmin_hz), mel_hi = HzToMel(fmax_hz);
  const double step = (mel_hi - mel_lo) / (num_filters + 1);
  for (std::size_t m = 0; m < num_filters; ++m) {
    const double left = mel_lo + m * step, center = left + step, right = center + step;
    for (std::size_t k = 0; k < num_bins; ++k) {
      const double mel = HzToMel(k * sample_rate / n_fft);
      if (mel > left && mel < right)
        weights_(m, k) = mel <= center ? (mel - left) / (center - left)
                                       : (right - mel) / (right - center);
    }
  }
}

Matrix MelFilterbank::Apply(const Matrix &spectrum) const {
  return ApplyRowTransform(spectrum, weights_);
}

Matrix MelFilterbankEnergies(const Matrix &spectrum, std::size_t num_filters,
                             double fmin_hz, double fmax_hz, double sample_rate) {
  const std::size_t n_fft = (spectrum.NumCols() - 1) * 2;
  return MelFilterbank(num_filters, n_fft, sample_rate, fmin_hz, fmax_hz).Apply(spectrum);
}

void MfccConfig::Validate(double sample_rate) const {
  if (preemph_coeff < 0.0 || preemph_coeff >= 1.0)
    ThrowError(ErrorCode::kInvalidArgument, "preemph_coeff must be in [0,1)");
  if (n_ceps > n_mel_filters)
    ThrowError(ErrorCode::kInvalidArgument, "n_ceps ", n_ceps, " > n_mel_filters ",
               n_mel_filters);
  if (frame_shift_ms > frame_len_ms)
    ThrowError(ErrorCode::kInvalidArgument, "frame shift exceeds frame length");
  if (MsToSamples(frame_len_ms, sample_rate) > n_fft)
    ThrowError(ErrorCode::kInvalidArgument, "frame of ",
               MsToSamples(frame_len_ms, sample_rate), " samples exceeds n_fft ", n_fft);
}

FeatureMatrix Mfcc(const AudioSegment &seg, const MfccConfig &cfg) {
  ValidateAudio(seg);
  cfg.Validate(seg.sample_rate);
  const auto emphasized = PreEmphasize(seg.samples, cfg.preemph_coeff);
  const Matrix frames = FrameAndWindow(emphasized, seg.sample_rate, cfg.frame_len_ms,
                                       cfg.frame_shift_ms, cfg.window);
  if (frames.NumRows() == 0)
    ThrowError(ErrorCode::kEmptyAudio, "no complete frame in ", seg.id);
  const double fmax = cfg.fmax_hz > 0 ? cfg.fmax_hz : seg.sample_rate / 2.0;
  Matrix mel = MelFilterbank(cfg.n_mel_filters, cfg.n_fft, seg.sample_rate, cfg.fmin_hz,
                             fmax)
                   .Apply(MagnitudeSpectrum(frames, cfg.n_fft));
  for (double &v : mel.Data()) v = std::log(v + cfg.log_floor);
  Matrix ceps = ApplyRowTransform(mel, DctMatrix(cfg.n_ceps, cfg.n_mel_filters));

  FeatureMatrix out;
  out.frame_len_ms = cfg.frame_len_ms;
  out.frame_shift_ms = cfg.frame_shift_ms;
  if (!cfg.add_deltas) {
    out.frames = std::move(ceps);
    return out;
  }
  const Matrix delta = ComputeDeltas(ceps);
  const Matrix delta2 = ComputeDeltas(delta);
  const std::size_t d = cfg.n_ceps;
  out.frames.Resize(ceps.NumRows(), 3 * d);
  for (std::size_t t = 0; t < ceps.NumRows(); ++t)
    for (std::size_t i = 0; i < d; ++i) {
      out.frames(t, i) = ceps(t, i);
      out.frames(t, d + i) = delta(t, i);
      out.frames(t, 2 * d + i) = delta2(t, i);
    }
  return out;
}

}  // namespace asrlab

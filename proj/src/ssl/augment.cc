// ssl/augment.cc

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

#include "ssl/augment.h"

#include <cmath>
#include <numbers>

#include "base/asr-error.h"

namespace asrlab::ssl {

namespace {

std::vector<double> Resample(const std::vector<double> &x, double factor, std::size_t out_len) {
  std::vector<double> y(out_len);
  const std::size_t n = x.size();
  for (std::size_t i = 0; i < out_len; ++i) {
    const double pos = static_cast<double>(i) * factor;
    const std::size_t k = static_cast<std::size_t>(pos);
    if (k + 1 >= n) {
      y[i] = n ? x[n - 1] : 0.0;
      continue;
    }
    const double frac = pos - static_cast<double>(k);
    y[i] = frac == 0.0 ? x[k] : (1.0 - frac) * x[k] + frac * x[k + 1];
  }
  return y;
}

// Hann-window overlap-add onto exactly out_len samples.
std::vector<double> TimeStretch(const std::vector<double> &x, std::size_t out_len) {
  const int win = 256, hop = win / 2;
  std::vector<double> y(out_len, 0.0), norm(out_len, 0.0);
  if (x.size() < static_cast<std::size_t>(win) || out_len < static_cast<std::size_t>(win))
    return Resample(x, static_cast<double>(x.size()) / std::max<std::size_t>(out_len, 1), out_len);
  const int frames = static_cast<int>((out_len - win) / hop) + 1;
  const double ana_hop =
      frames > 1 ? static_cast<double>(x.size() - win) / (frames - 1) : 0.0;
  std::vector<double> w(win);
  for (int i = 0; i < win; ++i) w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * i / win);
  for (int f = 0; f < frames; ++f) {
    const std::size_t src = static_cast<std::size_t>(std::lround(f * ana_hop));
    const std::size_t dst = static_cast<std::size_t>(f) * hop;
    for (int i = 0; i < win; ++i) {
      y[dst + i] += w[i] * x[src + i];
      norm[dst + i] += w[i];
    }
  }
  // window edges and the tail past the last frame fall back to nearest
  for (std::size_t i = 0; i < out_len; ++i) {
    if (norm[i] > 1e-3) {
      y[i] /= norm[i];
    } else {
      const double pos = static_cast<double>(i) * (x.size() - 1) / std::max<std::size_t>(out_len - 1, 1);
      y[i] = x[std::min(x.size() - 1, static_cast<std::size_t>(std::lround(pos)))];
    }
  }
  return y;
}

}  // namespace

AugmentPolicy SampleAugmentPolicy(Rng *rng) {
  static const double kSpeeds[] = {0.9, 1.1, 1.15};
  AugmentPolicy p;
  p.speed = kSpeeds[rng->Index(3)];
  const double mag = rng->Uniform(250.0, 350.0);
  p.pitch_cents = rng->Bernoulli(0.5) ? mag : -mag;
  p.reverb = rng->Bernoulli(0.5);
  return p;
}

AudioSegment SpeedPerturb(const AudioSegment &seg, double factor) {
  if (!(factor > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "speed factor ", factor);
  AudioSegment out = seg;
  const auto len = static_cast<std::size_t>(std::llround(seg.samples.size() / factor));
  out.samples = Resample(seg.samples, factor, len);
  return out;
}

AudioSegment PitchShift(const AudioSegment &seg, double cents) {
  if (cents == 0.0) return seg;
  const double f = std::pow(2.0, cents / 1200.0);
  AudioSegment out = seg;
  const auto len = static_cast<std::size_t>(std::llround(seg.samples.size() / f));
  out.samples = TimeStretch(Resample(seg.samples, f, std::max<std::size_t>(len, 1)), seg.samples.size());
  return out;
}

AudioSegment ApplyRir(const AudioSegment &seg, const std::vector<double> &rir) {
  AudioSegment out = seg;
  const std::size_t n = seg.samples.size();
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    const std::size_t kmax = std::min(rir.size(), i + 1);
    for (std::size_t k = 0; k < kmax; ++k) s += rir[k] * seg.samples[i - k];
    out.samples[i] = s;
  }
  return out;
}

std::vector<double> SyntheticRir(double sample_rate, double rt60, Rng *rng) {
  if (!(rt60 > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "rt60 ", rt60);
  const auto len = static_cast<std::size_t>(rt60 * sample_rate);
  std::vector<double> h(std::max<std::size_t>(len, 1), 0.0);
  h[0] = 1.0;
  const double decay = std::log(1000.0) / (rt60 * sample_rate);
  for (std::size_t i = 1; i < h.size(); ++i) h[i] = 0.1 * rng->Gauss() * std::exp(-decay * i);
  return h;
}

AudioSegment AugmentWaveform(const AudioSegment &seg, const AugmentPolicy &policy, Rng *rng) {
  AudioSegment out = SpeedPerturb(seg, policy.speed);
  out = PitchShift(out, policy.pitch_cents);
  if (policy.reverb) out = ApplyRir(out, SyntheticRir(out.sample_rate, policy.rt60, rng));
  ValidateAudio(out);
  return out;
}

}  // namespace asrlab::ssl

// ssl/augment.h

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

#ifndef ASRLAB_SSL_AUGMENT_H_
#define ASRLAB_SSL_AUGMENT_H_

#include <vector>

#include "base/rand.h"
#include "feat/wave.h"

namespace asrlab::ssl {

struct AugmentPolicy {
  double speed = 1.0;        // 0.9 / 1.1 / 1.15
  double pitch_cents = 0.0;  // [-350,-250] or [250,350]
  bool reverb = false;
  double rt60 = 0.3;         // seconds
};

/// Speed from {0.9, 1.1, 1.15}, pitch uniform over +-[250, 350] cents,
/// reverb with probability 1/2.
AugmentPolicy SampleAugmentPolicy(Rng *rng);

/// Linear-interpolation resampling to round(N / factor) samples.
AudioSegment SpeedPerturb(const AudioSegment &seg, double factor);
/// Resample by 2^(cents/1200), then overlap-add time stretch back to N.
AudioSegment PitchShift(const AudioSegment &seg, double cents);
/// Causal convolution truncated to the input length.
AudioSegment ApplyRir(const AudioSegment &seg, const std::vector<double> &rir);
/// h[0] = 1 followed by Gaussian taps decaying by 60 dB over rt60.
std::vector<double> SyntheticRir(double sample_rate, double rt60, Rng *rng);

AudioSegment AugmentWaveform(const AudioSegment &seg, const AugmentPolicy &policy, Rng *rng);

}  // namespace asrlab::ssl

#endif  // ASRLAB_SSL_AUGMENT_H_

// finetune/spec-augment.h

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

#ifndef ASRLAB_FINETUNE_SPEC_AUGMENT_H_
#define ASRLAB_FINETUNE_SPEC_AUGMENT_H_

#include <cstdint>
#include <vector>

#include "base/kv-config.h"
#include "base/matrix.h"
#include "base/rand.h"
#include "ssl/masking.h"

namespace asrlab {

enum class SpecAugmentMode { kFraction, kSpan };

struct SpecAugmentConfig {
  SpecAugmentMode mode = SpecAugmentMode::kFraction;
  // Fraction mode: exactly floor(frac * T) frames and floor(frac * D)
  // features, split into at most this many disjoint spans.
  double time_frac = 0.5;
  double feat_frac = 0.1;
  int time_spans = 2;
  int feat_spans = 1;
  // Span mode.
  ssl::MaskConfig time_mask{0.065, 10};
  ssl::MaskConfig feat_mask{0.0, 64};

  void Validate() const;
  KvConfig ToKv() const;
  /// Missing keys keep their defaults.
  static SpecAugmentConfig FromKv(const KvConfig &kv);
};

struct AugmentMasks {
  std::vector<bool> frames;    // T
  std::vector<bool> features;  // D
  std::int64_t MaskedFrames() const;
  std::int64_t MaskedFeatures() const;
  /// Cells covered by a masked frame or a masked feature.
  std::int64_t MaskedCells() const;
};

/// Exactly `count` of `length` indices set, as at most `spans` disjoint
/// contiguous runs with uniformly random sizes and gaps.
std::vector<bool> SampleExactSpans(int length, int count, int spans, Rng *rng);

AugmentMasks SampleAugmentMasks(int num_frames, int dim, const SpecAugmentConfig &cfg, Rng *rng);

/// Zeroes masked frames and features in place.
void ApplyAugmentMasks(const AugmentMasks &masks, Matrix *feats);

/// Samples masks and applies them; returns the masks used.
AugmentMasks SpecAugment(Matrix *feats, const SpecAugmentConfig &cfg, Rng *rng);

}  // namespace asrlab

#endif  // ASRLAB_FINETUNE_SPEC_AUGMENT_H_

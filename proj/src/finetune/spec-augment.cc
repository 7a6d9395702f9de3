// finetune/spec-augment.cc

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

#include "finetune/spec-augment.h"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <numeric>

#include "base/asr-error.h"

namespace asrlab {

void SpecAugmentConfig::Validate() const {
  if (time_frac < 0.0 || time_frac > 1.0 || feat_frac < 0.0 || feat_frac > 1.0)
    ThrowError(ErrorCode::kInvalidArgument, "SpecAugment fractions must lie in [0, 1]");
  if (time_spans < 1 || feat_spans < 1)
    ThrowError(ErrorCode::kInvalidArgument, "SpecAugment needs at least one span");
  time_mask.Validate();
  feat_mask.Validate();
}

KvConfig SpecAugmentConfig::ToKv() const {
  KvConfig kv;
  kv.Set("mode", mode == SpecAugmentMode::kFraction ? "fraction" : "span");
  kv.Set("time_frac", time_frac);
  kv.Set("feat_frac", feat_frac);
  kv.Set("time_spans", time_spans);
  kv.Set("feat_spans", feat_spans);
  kv.Set("time_prob", time_mask.prob);
  kv.Set("time_span", time_mask.span);
  kv.Set("feat_prob", feat_mask.prob);
  kv.Set("feat_span", feat_mask.span);
  return kv;
}

SpecAugmentConfig SpecAugmentConfig::FromKv(const KvConfig &kv) {
  SpecAugmentConfig c;
  const std::string mode = kv.GetString("mode", "fraction");
  if (mode == "fraction") {
    c.mode = SpecAugmentMode::kFraction;
  } else if (mode == "span") {
    c.mode = SpecAugmentMode::kSpan;
  } else {
    ThrowError(ErrorCode::kFormatError, "unknown SpecAugment mode '", mode, "'");
  }
  c.time_frac = kv.GetDouble("time_frac", c.time_frac);
  c.feat_frac = kv.GetDouble("feat_frac", c.feat_frac);
  c.time_spans = kv.GetInt("time_spans", c.time_spans);
  c.feat_spans = kv.GetInt("feat_spans", c.feat_spans);
  c.time_mask.prob = kv.GetDouble("time_prob", c.time_mask.prob);
  c.time_mask.span = kv.GetInt("time_span", c.time_mask.span);
  c.feat_mask.prob = kv.GetDouble("feat_prob", c.feat_mask.prob);
  c.feat_mask.span = kv.GetInt("feat_span", c.feat_mask.span);
  c.Validate();
  return c;
}

std::int64_t AugmentMasks::MaskedFrames() const {
  return std::count(frames.begin(), frames.end(), true);
}

std::int64_t AugmentMasks::MaskedFeatures() const {
  return std::count(features.begin(), features.end(), true);
}

std::int64_t AugmentMasks::MaskedCells() const {
  const std::int64_t f = MaskedFrames(), g = MaskedFeatures();
  const std::int64_t t = frames.size(), d = features.size();
  return f * d + g * t - f * g;
}

std::vector<bool> SampleExactSpans(int length, int count, int spans, Rng *rng) {
  ASR_ASSERT(count >= 0 && count <= length && spans >= 1);
  std::vector<bool> mask(length, false);
  if (count == 0) return mask;
  const int k = std::min(spans, count);
  // Span sizes: a uniform composition of `count` into k positive parts.
  std::vector<int> cuts(count - 1);
  std::iota(cuts.begin(), cuts.end(), 1);
  std::vector<int> chosen;
  std::sample(cuts.begin(), cuts.end(), std::back_inserter(chosen), k - 1, rng->Engine());
  chosen.push_back(count);
  std::vector<int> sizes;
  int prev = 0;
  for (int c : chosen) {
    sizes.push_back(c - prev);
    prev = c;
  }
  // Gaps: the free positions split into k + 1 non-negative parts.
  const int free = length - count;
  std::vector<int> slots(free + k);
  std::iota(slots.begin(), slots.end(), 0);
  std::vector<int> bars;
  std::sample(slots.begin(), slots.end(), std::back_inserter(bars), k, rng->Engine());
  int pos = 0, last_bar = -1;
  for (int i = 0; i < k; ++i) {
    pos += bars[i] - last_bar - 1;
    last_bar = bars[i];
    for (int j = 0; j < sizes[i]; ++j) mask[pos++] = true;
  }
  return mask;
}

AugmentMasks SampleAugmentMasks(int num_frames, int dim, const SpecAugmentConfig &cfg, Rng *rng) {
  if (num_frames < 1 || dim < 1)
    ThrowError(ErrorCode::kInvalidArgument, "SpecAugment needs T, D >= 1");
  AugmentMasks m;
  if (cfg.mode == SpecAugmentMode::kFraction) {
    const int nt = static_cast<int>(std::floor(cfg.time_frac * num_frames));
    const int nf = static_cast<int>(std::floor(cfg.feat_frac * dim));
    m.frames = SampleExactSpans(num_frames, nt, cfg.time_spans, rng);
    m.features = SampleExactSpans(dim, nf, cfg.feat_spans, rng);
  } else {
    m.frames = ssl::SampleSpanMask(num_frames, cfg.time_mask, rng);
    m.features = ssl::SampleSpanMask(dim, cfg.feat_mask, rng);
  }
  return m;
}

void ApplyAugmentMasks(const AugmentMasks &masks, Matrix *feats) {
  if (masks.frames.size() != feats->NumRows() || masks.features.size() != feats->NumCols())
    ThrowError(ErrorCode::kShapeMismatch, "SpecAugment mask does not match features");
  for (std::size_t t = 0; t < feats->NumRows(); ++t)
    for (std::size_t d = 0; d < feats->NumCols(); ++d)
      if (masks.frames[t] || masks.features[d]) (*feats)(t, d) = 0.0;
}

AugmentMasks SpecAugment(Matrix *feats, const SpecAugmentConfig &cfg, Rng *rng) {
  AugmentMasks m = SampleAugmentMasks(static_cast<int>(feats->NumRows()),
                                      static_cast<int>(feats->NumCols()), cfg, rng);
  ApplyAugmentMasks(m, feats);
  return m;
}

}  // namespace asrlab

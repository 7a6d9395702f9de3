// ssl/masking.cc

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

#include "ssl/masking.h"

#include <algorithm>
#include <cmath>

#include "base/asr-error.h"

namespace asrlab::ssl {

void MaskConfig::Validate() const {
  if (!(prob >= 0.0 && prob <= 1.0) || span < 1)
    ThrowError(ErrorCode::kInvalidArgument, "mask p=", prob, " M=", span);
}

std::vector<bool> SampleSpanMask(int length, const MaskConfig &cfg, Rng *rng) {
  cfg.Validate();
  std::vector<bool> mask(std::max(length, 0), false);
  for (int i = 0; i < length; ++i)
    if (rng->Bernoulli(cfg.prob))
      for (int j = i; j < std::min(length, i + cfg.span); ++j) mask[j] = true;
  return mask;
}

double ExpectedMaskFraction(const MaskConfig &cfg) {
  return 1.0 - std::pow(1.0 - cfg.prob, cfg.span);
}

}  // namespace asrlab::ssl

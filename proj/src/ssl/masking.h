// ssl/masking.h

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

#ifndef ASRLAB_SSL_MASKING_H_
#define ASRLAB_SSL_MASKING_H_

#include <vector>

#include "base/rand.h"

namespace asrlab::ssl {

struct MaskConfig {
  double prob = 0.065;  // per-index span start probability
  int span = 10;        // M
  void Validate() const;
};

/// Every index starts a span of `span` positions with probability `prob`;
/// the union of spans (clipped at the end) is returned.
std::vector<bool> SampleSpanMask(int length, const MaskConfig &cfg, Rng *rng);

/// 1 - (1 - p)^M.
double ExpectedMaskFraction(const MaskConfig &cfg);

}  // namespace asrlab::ssl

#endif  // ASRLAB_SSL_MASKING_H_

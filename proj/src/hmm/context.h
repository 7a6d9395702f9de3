// hmm/context.h

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

#ifndef ASRLAB_HMM_CONTEXT_H_
#define ASRLAB_HMM_CONTEXT_H_

#include <compare>

namespace asrlab {

/// A triphone HMM state: center phone with its left/right neighbours and the
/// state position inside the phone's HMM.
struct ContextState {
  int left = 0;
  int center = 0;
  int right = 0;
  int position = 0;

  auto operator<=>(const ContextState &) const = default;
};

}  // namespace asrlab

#endif  // ASRLAB_HMM_CONTEXT_H_

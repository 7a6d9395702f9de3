// hmm/hmm-topology.h

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

#ifndef ASRLAB_HMM_HMM_TOPOLOGY_H_
#define ASRLAB_HMM_HMM_TOPOLOGY_H_

#include <array>
#include <vector>

namespace asrlab {

enum class TransitionType { kStay = 0, kNext = 1, kSkip = 2 };

/// The 0-1-2 topology: from every state one may stay, advance one state, or
/// skip one state.  Probabilities are tied per state position within a phone
/// (the transition class) and shared by all phones.
struct HmmTopology {
  int states_per_phone = 3;
  std::vector<std::array<double, 3>> log_probs;  // [class][TransitionType]

  static HmmTopology Uniform012(int states_per_phone = 3);
  /// stay/next/skip probabilities identical for every class.
  static HmmTopology FromProbs(int states_per_phone, double stay, double next, double skip);

  int NumClasses() const { return static_cast<int>(log_probs.size()); }
  double LogProb(int cls, TransitionType type) const {
    return log_probs[cls][static_cast<int>(type)];
  }
  /// Throws unless every class sums to 1 within 1e-9.
  void Validate() const;
};

}  // namespace asrlab

#endif  // ASRLAB_HMM_HMM_TOPOLOGY_H_

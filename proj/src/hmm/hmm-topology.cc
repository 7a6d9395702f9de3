// hmm/hmm-topology.cc

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

#include "hmm/hmm-topology.h"

#include <cmath>

#include "base/asr-error.h"

namespace asrlab {

HmmTopology HmmTopology::Uniform012(int states_per_phone) {
  return FromProbs(states_per_phone, 1.0 / 3, 1.0 / 3, 1.0 / 3);
}

HmmTopology HmmTopology::FromProbs(int states_per_phone, double stay, double next,
                                   double skip) {
  if (states_per_phone < 1)
    ThrowError(ErrorCode::kInvalidArgument, "states_per_phone must be >= 1");
  HmmTopology topo;
  topo.states_per_phone = states_per_phone;
  const double total = stay + next + skip;
  topo.log_probs.assign(states_per_phone, {std::log(stay / total), std::log(next / total),
                                           std::log(skip / total)});
  topo.Validate();
  return topo;
}

void HmmTopology::Validate() const {
  if (static_cast<int>(log_probs.size()) != states_per_phone)
    ThrowError(ErrorCode::kInvalidArgument, "topology has ", log_probs.size(),
               " classes for ", states_per_phone, " states per phone");
  for (const auto &row : log_probs) {
    double sum = 0.0;
    for (double lp : row) sum += std::exp(lp);
    if (std::abs(sum - 1.0) > 1e-9)
      ThrowError(ErrorCode::kInvalidArgument, "transition probabilities sum to ", sum);
  }
}

}  // namespace asrlab

// ssl/ssl-losses.h

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

#ifndef ASRLAB_SSL_SSL_LOSSES_H_
#define ASRLAB_SSL_SSL_LOSSES_H_

#include <vector>

#include "base/rand.h"
#include "nnet/ops.h"

namespace asrlab::ssl {

using nnet::Var;

/// For row i of `context`: -log softmax_j(cos(c_i, targets[cand[i][j]]) /
/// kappa) at j = 0, i.e. candidates[i][0] is the positive.  Averaged over
/// rows.  Zero-norm vectors throw DegenerateVector.
Var ContrastiveLoss(const Var &context, const Var &targets,
                    const std::vector<std::vector<int>> &candidates, double kappa);

/// Row i gets candidates {i, d_1..d_K} with each d_k uniform over the other
/// rows (with replacement).  Needs n >= 2.
std::vector<std::vector<int>> SampleCandidates(int n, int k, Rng *rng);

}  // namespace asrlab::ssl

#endif  // ASRLAB_SSL_SSL_LOSSES_H_

// nnet/grad-check.cc

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

#include "nnet/grad-check.h"

#include <algorithm>
#include <cmath>

namespace asrlab::nnet {

GradCheckResult CheckGradients(const std::function<Var(const std::vector<Var> &)> &f,
                               const std::vector<Tensor> &inputs, double h) {
  std::vector<Var> leaves;
  for (const auto &t : inputs) leaves.push_back(Leaf(t, true));
  Backward(f(leaves));

  auto evaluate = [&](const std::vector<Tensor> &xs) {
    std::vector<Var> cs;
    for (const auto &t : xs) cs.push_back(Constant(t));
    return ScalarValue(f(cs));
  };

  GradCheckResult res;
  std::vector<Tensor> work = inputs;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Tensor analytic = leaves[i]->HasGrad() ? leaves[i]->grad : Tensor(inputs[i].Shape());
    double diff = 0.0, na = 0.0, nn = 0.0;
    for (std::size_t j = 0; j < inputs[i].Size(); ++j) {
      const double orig = work[i][j];
      work[i][j] = orig + h;
      const double up = evaluate(work);
      work[i][j] = orig - h;
      const double down = evaluate(work);
      work[i][j] = orig;
      const double numeric = (up - down) / (2.0 * h);
      diff += (analytic[j] - numeric) * (analytic[j] - numeric);
      na += analytic[j] * analytic[j];
      nn += numeric * numeric;
    }
    const double denom = std::sqrt(na) + std::sqrt(nn);
    const double rel = std::sqrt(diff) / std::max(denom, 1e-6);
    res.rel_error.push_back(rel);
    res.max_rel_error = std::max(res.max_rel_error, rel);
  }
  return res;
}

}  // namespace asrlab::nnet

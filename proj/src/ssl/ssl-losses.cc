// ssl/ssl-losses.cc

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

#include "ssl/ssl-losses.h"

#include "base/asr-error.h"

namespace asrlab::ssl {

using namespace nnet;

Var ContrastiveLoss(const Var &context, const Var &targets,
                    const std::vector<std::vector<int>> &candidates, double kappa) {
  if (!(kappa > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "kappa must be > 0");
  if (context->value.Cols() != targets->value.Cols())
    ThrowError(ErrorCode::kShapeMismatch, "context ", context->value.ShapeString(), " vs targets ",
               targets->value.ShapeString());
  const Var sim = MatMul(RowL2Normalize(context), Transpose(RowL2Normalize(targets)));
  const Var logits = Scale(GatherCols(sim, candidates), 1.0 / kappa);
  return CrossEntropy(logits, std::vector<int>(candidates.size(), 0));
}

std::vector<std::vector<int>> SampleCandidates(int n, int k, Rng *rng) {
  if (n < 2 || k < 1)
    ThrowError(ErrorCode::kInvalidArgument, "need >= 2 rows and >= 1 distractor, got ", n, ", ", k);
  std::vector<std::vector<int>> out(n);
  for (int i = 0; i < n; ++i) {
    out[i].push_back(i);
    for (int j = 0; j < k; ++j) {
      int d = rng->Index(n - 1);
      if (d >= i) ++d;
      out[i].push_back(d);
    }
  }
  return out;
}

}  // namespace asrlab::ssl

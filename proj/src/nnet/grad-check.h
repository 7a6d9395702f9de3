// nnet/grad-check.h

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

#ifndef ASRLAB_NNET_GRAD_CHECK_H_
#define ASRLAB_NNET_GRAD_CHECK_H_

#include <functional>
#include <vector>

#include "nnet/autograd.h"

namespace asrlab::nnet {

struct GradCheckResult {
  /// ||a - n|| / max(||a|| + ||n||, 1e-6) per input.  The floor keeps
  /// inputs with an identically zero gradient (roundoff only) at ~0.
  std::vector<double> rel_error;
  double max_rel_error = 0.0;
};

/// Compares reverse-mode gradients of a scalar function against central
/// differences with step h.  `f` must be deterministic.
GradCheckResult CheckGradients(const std::function<Var(const std::vector<Var> &)> &f,
                               const std::vector<Tensor> &inputs, double h = 1e-4);

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_GRAD_CHECK_H_

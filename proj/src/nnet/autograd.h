// nnet/autograd.h

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

#ifndef ASRLAB_NNET_AUTOGRAD_H_
#define ASRLAB_NNET_AUTOGRAD_H_

#include <functional>
#include <memory>
#include <vector>

#include "nnet/tensor.h"

namespace asrlab::nnet {

struct Node;
using Var = std::shared_ptr<Node>;

/// One value in a computation graph.  `backward` reads this node's gradient
/// and accumulates into the parents' gradients.
struct Node {
  Tensor value;
  Tensor grad;  // allocated on first use
  bool requires_grad = false;
  std::vector<Var> parents;
  std::function<void(Node &)> backward;

  Tensor &Grad();
  bool HasGrad() const { return !grad.Empty(); }
};

/// Leaf that receives gradients (a parameter or a checked input).
Var Leaf(Tensor value, bool requires_grad = true);
/// Leaf without gradient.
Var Constant(Tensor value);

/// Creates an op result; requires_grad if any parent does.  `backward` is
/// dropped when no parent needs gradients.
Var MakeOp(Tensor value, std::vector<Var> parents, std::function<void(Node &)> backward);

/// Reverse-mode sweep from a [1,1] loss: seeds d loss = 1 and runs every
/// reachable backward function in reverse topological order.
void Backward(const Var &loss);

inline double ScalarValue(const Var &v) { return v->value[0]; }

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_AUTOGRAD_H_

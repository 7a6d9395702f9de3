// nnet/autograd.cc

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

#include "nnet/autograd.h"

#include <unordered_set>

#include "base/asr-error.h"

namespace asrlab::nnet {

Tensor &Node::Grad() {
  if (grad.Empty() && !value.Empty()) grad = Tensor(value.Shape(), 0.0);
  return grad;
}

Var Leaf(Tensor value, bool requires_grad) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  n->requires_grad = requires_grad;
  return n;
}

Var Constant(Tensor value) { return Leaf(std::move(value), false); }

Var MakeOp(Tensor value, std::vector<Var> parents, std::function<void(Node &)> backward) {
  auto n = std::make_shared<Node>();
  n->value = std::move(value);
  for (const auto &p : parents) n->requires_grad = n->requires_grad || p->requires_grad;
  if (n->requires_grad) {
    n->parents = std::move(parents);
    n->backward = std::move(backward);
  }
  return n;
}

void Backward(const Var &loss) {
  if (loss->value.Size() != 1)
    ThrowError(ErrorCode::kShapeMismatch, "Backward needs a scalar loss, got ",
               loss->value.ShapeString());
  if (!loss->requires_grad) return;
  // iterative post-order DFS
  std::vector<Node *> order;
  std::unordered_set<Node *> seen;
  std::vector<std::pair<Node *, std::size_t>> stack{{loss.get(), 0}};
  seen.insert(loss.get());
  while (!stack.empty()) {
    auto &[node, next] = stack.back();
    if (next < node->parents.size()) {
      Node *p = node->parents[next++].get();
      if (p->requires_grad && seen.insert(p).second) stack.emplace_back(p, 0);
    } else {
      order.push_back(node);
      stack.pop_back();
    }
  }
  loss->Grad()[0] += 1.0;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Node *n = *it;
    if (n->backward && n->HasGrad()) n->backward(*n);
  }
}

}  // namespace asrlab::nnet

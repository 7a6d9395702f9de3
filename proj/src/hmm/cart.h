// hmm/cart.h

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

#ifndef ASRLAB_HMM_CART_H_
#define ASRLAB_HMM_CART_H_

#include <span>
#include <string>
#include <vector>

#include "hmm/context.h"

namespace asrlab {

enum class ContextKey { kLeft = 0, kCenter = 1, kRight = 2, kPosition = 3 };

/// "Is the <key> of this state in <values>?"
struct PhoneticQuestion {
  ContextKey key = ContextKey::kCenter;
  std::vector<int> values;  // sorted
  std::string name;

  bool Matches(const ContextState &ctx) const;
};

/// Generic inventory: singleton and silence/non-silence sets for left,
/// center and right phone, and singleton state positions.
std::vector<PhoneticQuestion> DefaultQuestions(int num_phones, int silence_phone,
                                               int states_per_phone);

struct CartNode {
  int question = -1;  // -1 for leaves
  int yes = -1;
  int no = -1;
  int leaf = -1;
};

/// Binary decision tree mapping every ContextState to a tied-state id.
class CartTree {
 public:
  CartTree() = default;
  CartTree(std::vector<PhoneticQuestion> questions, std::vector<CartNode> nodes);

  /// Context-independent tree: one leaf per (center phone, position), leaf id
  /// center * states_per_phone + position.
  static CartTree Monophone(int num_phones, int states_per_phone);

  int Leaf(const ContextState &ctx) const;
  int NumLeaves() const { return num_leaves_; }
  const std::vector<PhoneticQuestion> &Questions() const { return questions_; }
  const std::vector<CartNode> &Nodes() const { return nodes_; }

 private:
  std::vector<PhoneticQuestion> questions_;
  std::vector<CartNode> nodes_;
  int num_leaves_ = 1;
};

/// Occupancy-weighted single-Gaussian statistics of one triphone state.
struct CartStats {
  ContextState context;
  double count = 0.0;
  std::vector<double> sum;
  std::vector<double> sumsq;
};

struct CartOptions {
  int max_leaves = 100;
  double min_count = 1.0;  // each child of a split needs at least this much data
  double min_gain = 0.0;   // stop when the best log-likelihood gain is smaller
  double var_floor = 1e-3;
};

/// Log-likelihood of pooled statistics under their own ML diagonal Gaussian
/// (variances floored).
double ClusterLogLikelihood(double count, std::span<const double> sum,
                            std::span<const double> sumsq, double var_floor);

/// Greedy top-down clustering: repeatedly applies the single (leaf, question)
/// split with the largest log-likelihood gain until max_leaves is reached or
/// no admissible split gains at least min_gain.
CartTree BuildCart(std::span<const CartStats> stats,
                   const std::vector<PhoneticQuestion> &questions, const CartOptions &opts);

}  // namespace asrlab

#endif  // ASRLAB_HMM_CART_H_

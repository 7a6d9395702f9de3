// hmm/cart.cc

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

#include "hmm/cart.h"

#include <algorithm>
#include <cmath>

#include "base/asr-error.h"
#include "base/math-utils.h"

namespace asrlab {

bool PhoneticQuestion::Matches(const ContextState &ctx) const {
  int v = 0;
  switch (key) {
    case ContextKey::kLeft: v = ctx.left; break;
    case ContextKey::kCenter: v = ctx.center; break;
    case ContextKey::kRight: v = ctx.right; break;
    case ContextKey::kPosition: v = ctx.position; break;
  }
  return std::binary_search(values.begin(), values.end(), v);
}

std::vector<PhoneticQuestion> DefaultQuestions(int num_phones, int silence_phone,
                                               int states_per_phone) {
  std::vector<PhoneticQuestion> qs;
  const char *names[] = {"left", "center", "right"};
  for (ContextKey key : {ContextKey::kLeft, ContextKey::kCenter, ContextKey::kRight}) {
    const std::string prefix = names[static_cast<int>(key)];
    for (int p = 0; p < num_phones; ++p)
      qs.push_back({key, {p}, prefix + "=" + std::to_string(p)});
    std::vector<int> speech;
    for (int p = 0; p < num_phones; ++p)
      if (p != silence_phone) speech.push_back(p);
    qs.push_back({key, speech, prefix + "=speech"});
  }
  for (int pos = 0; pos < states_per_phone; ++pos)
    qs.push_back({ContextKey::kPosition, {pos}, "position=" + std::to_string(pos)});
  return qs;
}

CartTree::CartTree(std::vector<PhoneticQuestion> questions, std::vector<CartNode> nodes)
    : questions_(std::move(questions)), nodes_(std::move(nodes)) {
  num_leaves_ = 0;
  for (const auto &n : nodes_)
    if (n.question < 0) num_leaves_ = std::max(num_leaves_, n.leaf + 1);
}

CartTree CartTree::Monophone(int num_phones, int states_per_phone) {
  std::vector<PhoneticQuestion> qs;
  for (int p = 0; p < num_phones; ++p)
    qs.push_back({ContextKey::kCenter, {p}, "center=" + std::to_string(p)});
  for (int s = 0; s < states_per_phone; ++s)
    qs.push_back({ContextKey::kPosition, {s}, "position=" + std::to_string(s)});

  std::vector<CartNode> nodes;
  // Builds a right-leaning chain of position questions below one phone.
  auto position_chain = [&](int phone) {
    const int first = static_cast<int>(nodes.size());
    for (int s = 0; s < states_per_phone; ++s) {
      if (s + 1 == states_per_phone) {
        nodes.push_back({-1, -1, -1, phone * states_per_phone + s});
      } else {
        const int here = static_cast<int>(nodes.size());
        nodes.push_back({num_phones + s, here + 1, here + 2, -1});
        nodes.push_back({-1, -1, -1, phone * states_per_phone + s});
      }
    }
    return first;
  };
  // Phone chain: node asks center==p, yes -> positions of p, no -> next phone.
  std::vector<int> phone_nodes;
  for (int p = 0; p < num_phones; ++p) {
    if (p + 1 == num_phones) {
      phone_nodes.push_back(position_chain(p));
    } else {
      phone_nodes.push_back(static_cast<int>(nodes.size()));
      nodes.push_back({p, -1, -1, -1});
      nodes[phone_nodes.back()].yes = position_chain(p);
    }
  }
  for (int p = 0; p + 1 < num_phones; ++p) nodes[phone_nodes[p]].no = phone_nodes[p + 1];
  // The root must be node 0.
  if (!phone_nodes.empty() && phone_nodes[0] != 0)
    ThrowError(ErrorCode::kInvalidArgument, "monophone tree root misplaced");
  return CartTree(std::move(qs), std::move(nodes));
}

int CartTree::Leaf(const ContextState &ctx) const {
  if (nodes_.empty()) return 0;
  int n = 0;
  while (nodes_[n].question >= 0)
    n = questions_[nodes_[n].question].Matches(ctx) ? nodes_[n].yes : nodes_[n].no;
  return nodes_[n].leaf;
}

double ClusterLogLikelihood(double count, std::span<const double> sum,
                            std::span<const double> sumsq, double var_floor) {
  if (count <= 0) return 0.0;
  double ll = 0.0;
  for (std::size_t d = 0; d < sum.size(); ++d) {
    const double mean = sum[d] / count;
    const double scatter = sumsq[d] - sum[d] * mean;  // sum (x - mean)^2
    const double var = std::max(scatter / count, var_floor);
    ll += count * (kLog2Pi + std::log(var)) + scatter / var;
  }
  return -0.5 * ll;
}

namespace {

struct Pooled {
  double count = 0.0;
  std::vector<double> sum, sumsq;

  explicit Pooled(std::size_t dim) : sum(dim, 0.0), sumsq(dim, 0.0) {}
  void Add(const CartStats &s) {
    count += s.count;
    for (std::size_t d = 0; d < sum.size(); ++d) {
      sum[d] += s.sum[d];
      sumsq[d] += s.sumsq[d];
    }
  }
  double LogLikelihood(double floor) const {
    return ClusterLogLikelihood(count, sum, sumsq, floor);
  }
};

struct Split {
  int question = -1;
  double gain = 0.0;
};

Split BestSplit(std::span<const CartStats> stats, const std::vector<int> &items,
                const std::vector<PhoneticQuestion> &questions, const CartOptions &opts,
                std::size_t dim) {
  Pooled all(dim);
  for (int i : items) all.Add(stats[i]);
  const double parent = all.LogLikelihood(opts.var_floor);
  Split best;
  for (std::size_t q = 0; q < questions.size(); ++q) {
    Pooled yes(dim), no(dim);
    for (int i : items)
      (questions[q].Matches(stats[i].context) ? yes : no).Add(stats[i]);
    if (yes.count < opts.min_count || no.count < opts.min_count) continue;
    if (yes.count <= 0 || no.count <= 0) continue;
    const double gain =
        yes.LogLikelihood(opts.var_floor) + no.LogLikelihood(opts.var_floor) - parent;
    if (best.question < 0 || gain > best.gain) best = {static_cast<int>(q), gain};
  }
  return best;
}

}  // namespace

CartTree BuildCart(std::span<const CartStats> stats,
                   const std::vector<PhoneticQuestion> &questions, const CartOptions &opts) {
  if (stats.empty()) ThrowError(ErrorCode::kInvalidArgument, "no statistics for CART");
  if (questions.empty()) ThrowError(ErrorCode::kInvalidArgument, "no CART questions");
  if (opts.max_leaves < 1) ThrowError(ErrorCode::kInvalidArgument, "max_leaves < 1");
  const std::size_t dim = stats.front().sum.size();

  std::vector<CartNode> nodes(1);
  std::vector<std::vector<int>> members(1);
  for (std::size_t i = 0; i < stats.size(); ++i) members[0].push_back(static_cast<int>(i));
  std::vector<int> open_leaves{0};
  std::vector<Split> cached{BestSplit(stats, members[0], questions, opts, dim)};

  while (static_cast<int>(open_leaves.size()) < opts.max_leaves) {
    int pick = -1;
    for (std::size_t k = 0; k < open_leaves.size(); ++k)
      if (cached[k].question >= 0 && (pick < 0 || cached[k].gain > cached[pick].gain))
        pick = static_cast<int>(k);
    if (pick < 0 || cached[pick].gain < opts.min_gain) break;

    const int node = open_leaves[pick];
    const int q = cached[pick].question;
    std::vector<int> yes, no;
    for (int i : members[node])
      (questions[q].Matches(stats[i].context) ? yes : no).push_back(i);
    const int yes_node = static_cast<int>(nodes.size());
    nodes.push_back({});
    nodes.push_back({});
    nodes[node].question = q;
    nodes[node].yes = yes_node;
    nodes[node].no = yes_node + 1;
    members.push_back(std::move(yes));
    members.push_back(std::move(no));
    members[node].clear();

    open_leaves[pick] = yes_node;
    cached[pick] = BestSplit(stats, members[yes_node], questions, opts, dim);
    open_leaves.push_back(yes_node + 1);
    cached.push_back(BestSplit(stats, members[yes_node + 1], questions, opts, dim));
  }

  // Number leaves in depth-first (yes before no) order.
  int next_leaf = 0;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int n = stack.back();
    stack.pop_back();
    if (nodes[n].question < 0) {
      nodes[n].leaf = next_leaf++;
    } else {
      stack.push_back(nodes[n].no);
      stack.push_back(nodes[n].yes);
    }
  }
  return CartTree(questions, std::move(nodes));
}

}  // namespace asrlab

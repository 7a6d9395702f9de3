// hmm/state-graph.cc

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

#include "hmm/state-graph.h"

#include <cmath>

#include "base/asr-error.h"
#include "base/math-utils.h"

namespace asrlab {

int StateGraph::AddState(const GraphState &state) {
  states_.push_back(state);
  incoming_.emplace_back();
  outgoing_.emplace_back();
  final_.push_back(false);
  return static_cast<int>(states_.size()) - 1;
}

void StateGraph::AddArc(int from, int to, TransitionType type) {
  ASR_ASSERT(from >= 0 && from < static_cast<int>(NumStates()));
  ASR_ASSERT(to >= 0 && to < static_cast<int>(NumStates()));
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({from, to, type, 0.0});
  outgoing_[from].push_back(id);
  incoming_[to].push_back(id);
}

void StateGraph::SetFinal(int state, bool final) { final_[state] = final; }

void StateGraph::Reweight(const HmmTopology &topo) {
  for (GraphArc &arc : arcs_) {
    const int cls = states_[arc.from].transition_class;
    if (cls < 0 || cls >= topo.NumClasses())
      ThrowError(ErrorCode::kInvalidArgument, "transition class ", cls, " out of range");
    arc.log_prob = topo.LogProb(cls, arc.type);
  }
}

StateGraph StateGraph::LinearChain(const std::vector<GraphState> &states,
                                   const HmmTopology &topo) {
  StateGraph g;
  for (const auto &s : states) g.AddState(s);
  const int n = static_cast<int>(states.size());
  for (int i = 0; i < n; ++i) {
    g.AddArc(i, i, TransitionType::kStay);
    if (i + 1 < n) g.AddArc(i, i + 1, TransitionType::kNext);
    if (i + 2 < n) g.AddArc(i, i + 2, TransitionType::kSkip);
  }
  if (n > 0) {
    g.AddInitial(0);
    g.SetFinal(n - 1);
  }
  for (int i = 0; i < n; ++i) g.canonical_path.push_back(i);
  g.Reweight(topo);
  return g;
}

namespace {

void CheckScores(const StateGraph &graph, const Matrix &scores) {
  for (const auto &s : graph.States())
    if (s.emission < 0 || s.emission >= static_cast<int>(scores.NumCols()))
      ThrowError(ErrorCode::kDimensionMismatch, "emission id ", s.emission,
                 " outside score matrix with ", scores.NumCols(), " columns");
}

// alpha[t][s] = log p(x_1..x_t, s_t = s)
Matrix ForwardPass(const StateGraph &graph, const Matrix &scores) {
  const std::size_t T = scores.NumRows(), S = graph.NumStates();
  Matrix alpha(T, S, kLogZero);
  if (T == 0) return alpha;
  const auto &states = graph.States();
  for (int s : graph.Initial()) alpha(0, s) = scores(0, states[s].emission);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t j = 0; j < S; ++j) {
      double acc = kLogZero;
      for (int a : graph.Incoming(j)) {
        const GraphArc &arc = graph.Arcs()[a];
        const double prev = alpha(t - 1, arc.from);
        if (prev != kLogZero) acc = LogAdd(acc, prev + arc.log_prob);
      }
      if (acc != kLogZero) alpha(t, j) = acc + scores(t, states[j].emission);
    }
  }
  return alpha;
}

double TotalFromAlpha(const StateGraph &graph, const Matrix &alpha) {
  if (alpha.NumRows() == 0) ThrowError(ErrorCode::kNoPath, "empty observation sequence");
  double total = kLogZero;
  const std::size_t last = alpha.NumRows() - 1;
  for (std::size_t s = 0; s < graph.NumStates(); ++s)
    if (graph.IsFinal(s)) total = LogAdd(total, alpha(last, s));
  if (total == kLogZero)
    ThrowError(ErrorCode::kNoPath, "no legal path through ", graph.NumStates(),
               " states in ", alpha.NumRows(), " frames");
  return total;
}

}  // namespace

double ForwardLogLikelihood(const StateGraph &graph, const Matrix &scores) {
  CheckScores(graph, scores);
  return TotalFromAlpha(graph, ForwardPass(graph, scores));
}

ForwardBackwardResult ForwardBackward(const StateGraph &graph, const Matrix &scores) {
  CheckScores(graph, scores);
  const Matrix alpha = ForwardPass(graph, scores);
  ForwardBackwardResult res;
  res.log_likelihood = TotalFromAlpha(graph, alpha);

  const std::size_t T = scores.NumRows(), S = graph.NumStates();
  const auto &states = graph.States();
  // beta[t][s] = log p(x_{t+1}..x_T | s_t = s)
  Matrix beta(T, S, kLogZero);
  for (std::size_t s = 0; s < S; ++s)
    if (graph.IsFinal(s)) beta(T - 1, s) = 0.0;
  res.arc_occupancy.assign(graph.Arcs().size(), 0.0);
  for (std::size_t t = T - 1; t-- > 0;) {
    for (std::size_t i = 0; i < S; ++i) {
      double acc = kLogZero;
      for (int a : graph.Outgoing(i)) {
        const GraphArc &arc = graph.Arcs()[a];
        const double next = beta(t + 1, arc.to);
        if (next != kLogZero)
          acc = LogAdd(acc, arc.log_prob + scores(t + 1, states[arc.to].emission) + next);
      }
      beta(t, i) = acc;
    }
    for (std::size_t a = 0; a < graph.Arcs().size(); ++a) {
      const GraphArc &arc = graph.Arcs()[a];
      const double from = alpha(t, arc.from), to = beta(t + 1, arc.to);
      if (from == kLogZero || to == kLogZero) continue;
      res.arc_occupancy[a] += std::exp(from + arc.log_prob +
                                       scores(t + 1, states[arc.to].emission) + to -
                                       res.log_likelihood);
    }
  }
  res.state_posteriors.Resize(T, S);
  for (std::size_t t = 0; t < T; ++t)
    for (std::size_t s = 0; s < S; ++s) {
      const double lp = alpha(t, s) + beta(t, s);
      if (alpha(t, s) != kLogZero && beta(t, s) != kLogZero)
        res.state_posteriors(t, s) = std::exp(lp - res.log_likelihood);
    }
  return res;
}

Matrix ForwardBackwardPosteriors(const StateGraph &graph, const Matrix &scores) {
  return ForwardBackward(graph, scores).state_posteriors;
}

Alignment ViterbiAlign(const StateGraph &graph, const Matrix &scores) {
  CheckScores(graph, scores);
  const std::size_t T = scores.NumRows(), S = graph.NumStates();
  if (T == 0) ThrowError(ErrorCode::kNoPath, "empty observation sequence");
  const auto &states = graph.States();
  Matrix delta(T, S, kLogZero);
  std::vector<int> back(T * S, -1);
  for (int s : graph.Initial())
    if (delta(0, s) == kLogZero) delta(0, s) = scores(0, states[s].emission);
  for (std::size_t t = 1; t < T; ++t) {
    for (std::size_t j = 0; j < S; ++j) {
      double best = kLogZero;
      int best_arc = -1;
      for (int a : graph.Incoming(j)) {
        const GraphArc &arc = graph.Arcs()[a];
        const double prev = delta(t - 1, arc.from);
        if (prev == kLogZero) continue;
        const double cand = prev + arc.log_prob;
        if (best_arc < 0 || cand > best || (cand == best && a < best_arc)) {
          best = cand;
          best_arc = a;
        }
      }
      if (best_arc >= 0) {
        delta(t, j) = best + scores(t, states[j].emission);
        back[t * S + j] = best_arc;
      }
    }
  }
  int best_state = -1;
  double best = kLogZero;
  for (std::size_t s = 0; s < S; ++s)
    if (graph.IsFinal(s) && delta(T - 1, s) != kLogZero &&
        (best_state < 0 || delta(T - 1, s) > best)) {
      best = delta(T - 1, s);
      best_state = static_cast<int>(s);
    }
  if (best_state < 0)
    ThrowError(ErrorCode::kNoPath, "no legal path through ", S, " states in ", T, " frames");
  Alignment ali;
  ali.log_prob = best;
  ali.states.resize(T);
  ali.emissions.resize(T);
  int s = best_state;
  for (std::size_t t = T; t-- > 0;) {
    ali.states[t] = s;
    ali.emissions[t] = states[s].emission;
    if (t > 0) s = graph.Arcs()[back[t * S + s]].from;
  }
  return ali;
}

std::vector<int> LinearAlignment(std::size_t num_frames, const std::vector<int> &state_seq) {
  const std::size_t n = state_seq.size();
  if (n == 0 || num_frames < n)
    ThrowError(ErrorCode::kTooShort, num_frames, " frames cannot cover ", n, " states");
  std::vector<int> out;
  out.reserve(num_frames);
  const std::size_t base = num_frames / n, extra = num_frames % n;
  for (std::size_t i = 0; i < n; ++i)
    out.insert(out.end(), base + (i < extra ? 1 : 0), state_seq[i]);
  return out;
}

}  // namespace asrlab

// hmm/state-graph.h

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

#ifndef ASRLAB_HMM_STATE_GRAPH_H_
#define ASRLAB_HMM_STATE_GRAPH_H_

#include <vector>

#include "base/matrix.h"
#include "hmm/context.h"
#include "hmm/hmm-topology.h"

namespace asrlab {

struct GraphState {
  int emission = 0;          // tied-state id used to look up emission scores
  int transition_class = 0;  // state position; indexes HmmTopology
  ContextState context;
};

struct GraphArc {
  int from = 0;
  int to = 0;
  TransitionType type = TransitionType::kNext;
  double log_prob = 0.0;  // resolved from the topology by Reweight()
};

/// An HMM state graph: states with emission ids, weighted arcs between them,
/// a set of initial states (entered at frame 0 at no cost) and final states.
/// Parallel arcs are allowed; a path is a sequence of arcs.
class StateGraph {
 public:
  int AddState(const GraphState &state);
  void AddArc(int from, int to, TransitionType type);
  void AddInitial(int state) { initial_.push_back(state); }
  void SetFinal(int state, bool final = true);

  std::size_t NumStates() const { return states_.size(); }
  const std::vector<GraphState> &States() const { return states_; }
  std::vector<GraphState> &MutableStates() { return states_; }
  const std::vector<GraphArc> &Arcs() const { return arcs_; }
  const std::vector<int> &Incoming(int state) const { return incoming_[state]; }
  const std::vector<int> &Outgoing(int state) const { return outgoing_[state]; }
  const std::vector<int> &Initial() const { return initial_; }
  bool IsFinal(int state) const { return final_[state]; }

  /// A representative state sequence (first pronunciations, no optional
  /// states) used for linear initial alignment.
  std::vector<int> canonical_path;

  /// Sets every arc's log_prob from the topology via the source state's class.
  void Reweight(const HmmTopology &topo);

  /// Linear 0-1-2 chain over the given states: stay/next/skip arcs, initial
  /// state 0, final state n-1.
  static StateGraph LinearChain(const std::vector<GraphState> &states,
                                const HmmTopology &topo);

 private:
  std::vector<GraphState> states_;
  std::vector<GraphArc> arcs_;
  std::vector<std::vector<int>> incoming_, outgoing_;
  std::vector<int> initial_;
  std::vector<bool> final_;
};

/// log p(x_1^T) summed over all legal paths; scores is T x num_emissions of
/// emission log-likelihoods.  Throws NoPath if no path exists.
double ForwardLogLikelihood(const StateGraph &graph, const Matrix &scores);

struct ForwardBackwardResult {
  double log_likelihood = 0.0;
  Matrix state_posteriors;           // T x num_states, rows sum to 1
  std::vector<double> arc_occupancy;  // expected traversals per arc
};

ForwardBackwardResult ForwardBackward(const StateGraph &graph, const Matrix &scores);

/// Convenience wrapper returning only the T x S occupancy matrix.
Matrix ForwardBackwardPosteriors(const StateGraph &graph, const Matrix &scores);

struct Alignment {
  std::vector<int> states;     // graph state per frame
  std::vector<int> emissions;  // tied-state id per frame
  double log_prob = 0.0;       // best-path score
};

/// Best path (max instead of sum).  Ties resolve to the lowest arc index.
Alignment ViterbiAlign(const StateGraph &graph, const Matrix &scores);

/// Splits T frames into len(state_seq) contiguous blocks of floor(T/S) or
/// ceil(T/S) frames; the T mod S longer blocks go to the earliest states.
std::vector<int> LinearAlignment(std::size_t num_frames, const std::vector<int> &state_seq);

}  // namespace asrlab

#endif  // ASRLAB_HMM_STATE_GRAPH_H_

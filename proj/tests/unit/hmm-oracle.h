// tests/unit/hmm-oracle.h

// Copyright 2026  asrlab authors

// See ../../../COPYING for clarification regarding multiple authors
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

// Brute-force path enumeration over a StateGraph, used as an independent
// oracle for forward, posteriors and Viterbi.
#ifndef ASRLAB_TESTS_HMM_ORACLE_H_
#define ASRLAB_TESTS_HMM_ORACLE_H_

#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "base/matrix.h"
#include "hmm/state-graph.h"

namespace asrlab::oracle {

struct PathEnumeration {
  double total_prob = 0.0;                      // sum over paths (linear domain)
  double best_log = -std::numeric_limits<double>::infinity();
  std::vector<int> best_states;
  Matrix occupancy;                             // unnormalized T x S
  int num_paths = 0;
};

inline PathEnumeration EnumeratePaths(const StateGraph &g, const Matrix &scores) {
  const std::size_t T = scores.NumRows();
  PathEnumeration out;
  out.occupancy = Matrix(T, g.NumStates());
  std::vector<int> path;
  std::function<void(int, double)> rec = [&](int s, double logp) {
    path.push_back(s);
    logp += scores(path.size() - 1, g.States()[s].emission);
    if (path.size() == T) {
      if (g.IsFinal(s)) {
        const double p = std::exp(logp);
        out.total_prob += p;
        ++out.num_paths;
        for (std::size_t t = 0; t < T; ++t) out.occupancy(t, path[t]) += p;
        if (logp > out.best_log) {
          out.best_log = logp;
          out.best_states = path;
        }
      }
    } else {
      for (const GraphArc &arc : g.Arcs())
        if (arc.from == s) rec(arc.to, logp + arc.log_prob);
    }
    path.pop_back();
  };
  if (T > 0)
    for (int s : g.Initial()) rec(s, 0.0);
  return out;
}

}  // namespace asrlab::oracle

#endif  // ASRLAB_TESTS_HMM_ORACLE_H_

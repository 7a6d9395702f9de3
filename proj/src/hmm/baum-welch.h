// hmm/baum-welch.h

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

#ifndef ASRLAB_HMM_BAUM_WELCH_H_
#define ASRLAB_HMM_BAUM_WELCH_H_

#include <string>
#include <vector>

#include "feat/feature-matrix.h"
#include "hmm/acoustic-model.h"
#include "hmm/state-graph.h"

namespace asrlab {

struct TrainingUtterance {
  std::string id;
  FeatureMatrix feats;
  StateGraph graph;  // contexts set; emission ids are resolved by the trainer
};

struct BaumWelchOptions {
  int iterations = 10;
  int target_components = 1;  // grow each mixture up to this many components
  int split_interval = 2;     // split the heaviest component every N iterations
  double var_floor = kDefaultVarFloor;
  bool update_transitions = true;
};

struct BaumWelchResult {
  AcousticModel model;
  /// Total corpus log-likelihood under the parameters entering each iteration.
  std::vector<double> log_likelihood;
  int skipped_utterances = 0;  // NoPath in the last iteration
};

/// Single-Gaussian model per leaf from a linear segmentation of every
/// utterance's canonical path.  Leaves without frames get the global
/// mean/variance.
AcousticModel InitializeFromLinearAlignment(std::vector<TrainingUtterance> &corpus,
                                            const PhoneSet &phones,
                                            const HmmTopology &topology,
                                            const CartTree &tree, double var_floor);

/// Single-Gaussian model per leaf from fixed per-frame graph-state alignments.
AcousticModel InitializeFromAlignments(std::vector<TrainingUtterance> &corpus,
                                       const std::vector<std::vector<int>> &state_alignments,
                                       const PhoneSet &phones, const HmmTopology &topology,
                                       const CartTree &tree, double var_floor);

/// Expectation-maximization over state posteriors (forward-backward).  GMM
/// weights, means and variances and the tied transition probabilities are
/// re-estimated each iteration; utterances without a legal path are skipped.
BaumWelchResult BaumWelchTrain(std::vector<TrainingUtterance> &corpus,
                               const AcousticModel &init, const BaumWelchOptions &opts);

}  // namespace asrlab

#endif  // ASRLAB_HMM_BAUM_WELCH_H_

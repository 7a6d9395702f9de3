// hmm/acoustic-model.h

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

#ifndef ASRLAB_HMM_ACOUSTIC_MODEL_H_
#define ASRLAB_HMM_ACOUSTIC_MODEL_H_

#include <iosfwd>
#include <string>
#include <vector>

#include "base/matrix.h"
#include "feat/feature-matrix.h"
#include "hmm/cart.h"
#include "hmm/diag-gmm.h"
#include "hmm/hmm-topology.h"
#include "hmm/state-graph.h"

namespace asrlab {

class PhoneSet {
 public:
  PhoneSet() = default;
  PhoneSet(std::vector<std::string> phones, const std::string &silence);

  int Index(const std::string &phone) const;  // -1 if unknown
  const std::string &Name(int id) const { return phones_[id]; }
  int NumPhones() const { return static_cast<int>(phones_.size()); }
  int Silence() const { return silence_; }
  const std::vector<std::string> &Phones() const { return phones_; }

 private:
  std::vector<std::string> phones_;
  int silence_ = 0;
};

/// GMM/HMM acoustic model: topology, state-tying tree and one mixture per
/// tree leaf.
struct AcousticModel {
  PhoneSet phones;
  HmmTopology topology;
  CartTree tree;
  std::vector<DiagGmm> emissions;  // indexed by tree leaf

  int NumEmissions() const { return static_cast<int>(emissions.size()); }
  std::size_t FeatureDim() const { return emissions.empty() ? 0 : emissions[0].Dim(); }

  /// T x NumEmissions matrix of log p(x_t | leaf).
  Matrix EmissionScores(const FeatureMatrix &feats) const;
  /// Sets each graph state's emission id from its context through the tree
  /// and reweights arcs from the topology.
  void ResolveGraph(StateGraph *graph) const;
};

// Versioned binary checkpoint ("AMDL", u32 version).
void WriteAcousticModel(std::ostream &os, const AcousticModel &model);
AcousticModel ReadAcousticModel(std::istream &is);
void WriteAcousticModelFile(const std::string &path, const AcousticModel &model);
AcousticModel ReadAcousticModelFile(const std::string &path);

/// score[t][s] = log p(s | x_t) - log p(s).  Posterior rows must sum to 1
/// within 1e-6 and priors must be positive and sum to 1; a non-positive prior
/// throws ZeroPrior.
Matrix PosteriorToScaledLikelihood(const Matrix &posteriors, std::span<const double> priors);

/// Relative frequency of each label over the alignments; unseen labels get
/// `floor` before renormalization.
std::vector<double> EstimateStatePriors(const std::vector<std::vector<int>> &alignments,
                                        int num_labels, double floor = 1e-8);

}  // namespace asrlab

#endif  // ASRLAB_HMM_ACOUSTIC_MODEL_H_

// hmm/baum-welch.cc

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

#include "hmm/baum-welch.h"

#include <cmath>

#include "base/asr-error.h"
#include "base/math-utils.h"

namespace asrlab {

namespace {

AcousticModel SingleGaussianModel(const std::vector<GmmAccumulator> &accs,
                                  const GmmAccumulator &global, const PhoneSet &phones,
                                  const HmmTopology &topology, const CartTree &tree,
                                  std::size_t dim, double var_floor) {
  AcousticModel model;
  model.phones = phones;
  model.topology = topology;
  model.tree = tree;
  DiagGmm global_gmm(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
  if (!global.Update(&global_gmm, var_floor))
    ThrowError(ErrorCode::kInvalidArgument, "no frames to initialize the model");
  model.emissions.assign(tree.NumLeaves(), global_gmm);
  for (int leaf = 0; leaf < tree.NumLeaves(); ++leaf)
    accs[leaf].Update(&model.emissions[leaf], var_floor);
  return model;
}

}  // namespace

AcousticModel InitializeFromAlignments(std::vector<TrainingUtterance> &corpus,
                                       const std::vector<std::vector<int>> &state_alignments,
                                       const PhoneSet &phones, const HmmTopology &topology,
                                       const CartTree &tree, double var_floor) {
  if (corpus.empty()) ThrowError(ErrorCode::kInvalidArgument, "empty training corpus");
  if (state_alignments.size() != corpus.size())
    ThrowError(ErrorCode::kLengthMismatch, "alignment count differs from corpus size");
  const std::size_t dim = corpus.front().feats.Dim();
  std::vector<GmmAccumulator> accs(tree.NumLeaves(), GmmAccumulator(1, dim));
  GmmAccumulator global(1, dim);
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    const auto &utt = corpus[u];
    const auto &ali = state_alignments[u];
    if (ali.size() != utt.feats.NumFrames())
      ThrowError(ErrorCode::kLengthMismatch, utt.id, ": alignment length ", ali.size(),
                 " != ", utt.feats.NumFrames());
    for (std::size_t t = 0; t < ali.size(); ++t) {
      const int leaf = tree.Leaf(utt.graph.States()[ali[t]].context);
      accs[leaf].AccumulateComponent(0, utt.feats.frames.Row(t), 1.0);
      global.AccumulateComponent(0, utt.feats.frames.Row(t), 1.0);
    }
  }
  return SingleGaussianModel(accs, global, phones, topology, tree, dim, var_floor);
}

AcousticModel InitializeFromLinearAlignment(std::vector<TrainingUtterance> &corpus,
                                            const PhoneSet &phones,
                                            const HmmTopology &topology,
                                            const CartTree &tree, double var_floor) {
  std::vector<std::vector<int>> alignments;
  for (const auto &utt : corpus)
    alignments.push_back(LinearAlignment(utt.feats.NumFrames(), utt.graph.canonical_path));
  return InitializeFromAlignments(corpus, alignments, phones, topology, tree, var_floor);
}

BaumWelchResult BaumWelchTrain(std::vector<TrainingUtterance> &corpus,
                               const AcousticModel &init, const BaumWelchOptions &opts) {
  BaumWelchResult res;
  res.model = init;
  AcousticModel &model = res.model;
  const std::size_t dim = model.FeatureDim();

  for (int iter = 0; iter < opts.iterations; ++iter) {
    std::vector<GmmAccumulator> accs;
    for (const auto &g : model.emissions) accs.emplace_back(g.NumComponents(), dim);
    std::vector<std::array<double, 3>> trans_counts(model.topology.NumClasses(),
                                                     {0.0, 0.0, 0.0});
    double total_ll = 0.0;
    res.skipped_utterances = 0;

    for (auto &utt : corpus) {
      if (utt.feats.Dim() != dim)
        ThrowError(ErrorCode::kDimensionMismatch, utt.id, ": feature dim ",
                   utt.feats.Dim(), " != model dim ", dim);
      model.ResolveGraph(&utt.graph);
      const Matrix scores = model.EmissionScores(utt.feats);
      ForwardBackwardResult fb;
      try {
        fb = ForwardBackward(utt.graph, scores);
      } catch (const AsrError &e) {
        if (e.code() != ErrorCode::kNoPath) throw;
        ++res.skipped_utterances;
        continue;
      }
      total_ll += fb.log_likelihood;
      const auto &states = utt.graph.States();
      for (std::size_t t = 0; t < utt.feats.NumFrames(); ++t)
        for (std::size_t s = 0; s < states.size(); ++s) {
          const double post = fb.state_posteriors(t, s);
          if (post > 0) {
            const int e = states[s].emission;
            accs[e].Accumulate(model.emissions[e], utt.feats.frames.Row(t), post);
          }
        }
      for (std::size_t a = 0; a < utt.graph.Arcs().size(); ++a) {
        const GraphArc &arc = utt.graph.Arcs()[a];
        trans_counts[states[arc.from].transition_class][static_cast<int>(arc.type)] +=
            fb.arc_occupancy[a];
      }
    }
    res.log_likelihood.push_back(total_ll);

    for (std::size_t e = 0; e < model.emissions.size(); ++e)
      accs[e].Update(&model.emissions[e], opts.var_floor);
    if (opts.update_transitions) {
      for (int c = 0; c < model.topology.NumClasses(); ++c) {
        const double total = trans_counts[c][0] + trans_counts[c][1] + trans_counts[c][2];
        if (!(total > 0)) continue;
        for (int k = 0; k < 3; ++k)
          model.topology.log_probs[c][k] =
              trans_counts[c][k] > 0 ? std::log(trans_counts[c][k] / total) : kLogZero;
      }
    }
    if (opts.split_interval > 0 && (iter + 1) % opts.split_interval == 0)
      for (auto &g : model.emissions)
        if (static_cast<int>(g.NumComponents()) < opts.target_components) g.SplitHeaviest();
  }
  return res;
}

}  // namespace asrlab

// hmm/acoustic-model.cc

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

#include "hmm/acoustic-model.h"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "base/asr-error.h"
#include "base/binary-io.h"

namespace asrlab {

PhoneSet::PhoneSet(std::vector<std::string> phones, const std::string &silence)
    : phones_(std::move(phones)) {
  silence_ = Index(silence);
  if (silence_ < 0) ThrowError(ErrorCode::kInvalidArgument, "silence phone ", silence,
                               " not in phone set");
}

int PhoneSet::Index(const std::string &phone) const {
  for (std::size_t i = 0; i < phones_.size(); ++i)
    if (phones_[i] == phone) return static_cast<int>(i);
  return -1;
}

Matrix AcousticModel::EmissionScores(const FeatureMatrix &feats) const {
  Matrix scores(feats.NumFrames(), emissions.size());
  for (std::size_t t = 0; t < feats.NumFrames(); ++t)
    for (std::size_t e = 0; e < emissions.size(); ++e)
      scores(t, e) = emissions[e].LogDensity(feats.frames.Row(t));
  return scores;
}

void AcousticModel::ResolveGraph(StateGraph *graph) const {
  for (GraphState &s : graph->MutableStates()) s.emission = tree.Leaf(s.context);
  graph->Reweight(topology);
}

namespace {

constexpr std::uint32_t kModelVersion = 1;

void WriteMatrix(std::ostream &os, const Matrix &m) {
  WritePod<std::uint32_t>(os, m.NumRows());
  WritePod<std::uint32_t>(os, m.NumCols());
  for (double v : m.Data()) WritePod<double>(os, v);
}

Matrix ReadMatrix(std::istream &is) {
  const auto r = ReadPod<std::uint32_t>(is);
  const auto c = ReadPod<std::uint32_t>(is);
  Matrix m(r, c);
  for (double &v : m.Data()) v = ReadPod<double>(is);
  return m;
}

}  // namespace

void WriteAcousticModel(std::ostream &os, const AcousticModel &model) {
  os.write("AMDL", 4);
  WritePod<std::uint32_t>(os, kModelVersion);
  WritePod<std::uint32_t>(os, model.phones.NumPhones());
  for (const auto &p : model.phones.Phones()) WriteString(os, p);
  WriteString(os, model.phones.Name(model.phones.Silence()));

  WritePod<std::int32_t>(os, model.topology.states_per_phone);
  for (const auto &row : model.topology.log_probs)
    for (double lp : row) WritePod<double>(os, lp);

  WritePod<std::uint32_t>(os, model.tree.Questions().size());
  for (const auto &q : model.tree.Questions()) {
    WritePod<std::int32_t>(os, static_cast<std::int32_t>(q.key));
    WriteString(os, q.name);
    WritePod<std::uint32_t>(os, q.values.size());
    for (int v : q.values) WritePod<std::int32_t>(os, v);
  }
  WritePod<std::uint32_t>(os, model.tree.Nodes().size());
  for (const auto &n : model.tree.Nodes()) {
    WritePod<std::int32_t>(os, n.question);
    WritePod<std::int32_t>(os, n.yes);
    WritePod<std::int32_t>(os, n.no);
    WritePod<std::int32_t>(os, n.leaf);
  }

  WritePod<std::uint32_t>(os, model.emissions.size());
  for (const auto &g : model.emissions) {
    WritePod<std::uint32_t>(os, g.NumComponents());
    for (double w : g.Weights()) WritePod<double>(os, w);
    WriteMatrix(os, g.Means());
    WriteMatrix(os, g.Vars());
  }
}

AcousticModel ReadAcousticModel(std::istream &is) {
  ExpectMagic(is, "AMDL");
  const auto version = ReadPod<std::uint32_t>(is);
  if (version != kModelVersion)
    ThrowError(ErrorCode::kFormatError, "unsupported acoustic model version ", version);
  AcousticModel model;
  std::vector<std::string> phones(ReadPod<std::uint32_t>(is));
  for (auto &p : phones) p = ReadString(is);
  const std::string silence = ReadString(is);
  model.phones = PhoneSet(std::move(phones), silence);

  model.topology.states_per_phone = ReadPod<std::int32_t>(is);
  model.topology.log_probs.resize(model.topology.states_per_phone);
  for (auto &row : model.topology.log_probs)
    for (double &lp : row) lp = ReadPod<double>(is);
  model.topology.Validate();

  std::vector<PhoneticQuestion> qs(ReadPod<std::uint32_t>(is));
  for (auto &q : qs) {
    q.key = static_cast<ContextKey>(ReadPod<std::int32_t>(is));
    q.name = ReadString(is);
    q.values.resize(ReadPod<std::uint32_t>(is));
    for (int &v : q.values) v = ReadPod<std::int32_t>(is);
  }
  std::vector<CartNode> nodes(ReadPod<std::uint32_t>(is));
  for (auto &n : nodes) {
    n.question = ReadPod<std::int32_t>(is);
    n.yes = ReadPod<std::int32_t>(is);
    n.no = ReadPod<std::int32_t>(is);
    n.leaf = ReadPod<std::int32_t>(is);
  }
  model.tree = CartTree(std::move(qs), std::move(nodes));

  model.emissions.resize(ReadPod<std::uint32_t>(is));
  for (auto &g : model.emissions) {
    std::vector<double> w(ReadPod<std::uint32_t>(is));
    for (double &x : w) x = ReadPod<double>(is);
    Matrix means = ReadMatrix(is);
    Matrix vars = ReadMatrix(is);
    g = DiagGmm(std::move(w), std::move(means), std::move(vars));
  }
  return model;
}

void WriteAcousticModelFile(const std::string &path, const AcousticModel &model) {
  std::ofstream os(path, std::ios::binary);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  WriteAcousticModel(os, model);
}

AcousticModel ReadAcousticModelFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open ", path);
  return ReadAcousticModel(is);
}

Matrix PosteriorToScaledLikelihood(const Matrix &posteriors, std::span<const double> priors) {
  if (posteriors.NumCols() != priors.size())
    ThrowError(ErrorCode::kDimensionMismatch, "posteriors have ", posteriors.NumCols(),
               " labels, priors ", priors.size());
  double prior_sum = 0.0;
  for (double p : priors) {
    if (!(p > 0)) ThrowError(ErrorCode::kZeroPrior, "state prior ", p);
    prior_sum += p;
  }
  if (std::abs(prior_sum - 1.0) > 1e-6)
    ThrowError(ErrorCode::kInvalidArgument, "priors sum to ", prior_sum);
  Matrix out(posteriors.NumRows(), posteriors.NumCols());
  for (std::size_t t = 0; t < posteriors.NumRows(); ++t) {
    double row_sum = 0.0;
    for (double p : posteriors.Row(t)) row_sum += p;
    if (std::abs(row_sum - 1.0) > 1e-6)
      ThrowError(ErrorCode::kInvalidArgument, "posterior row ", t, " sums to ", row_sum);
    for (std::size_t s = 0; s < priors.size(); ++s)
      out(t, s) = std::log(posteriors(t, s)) - std::log(priors[s]);
  }
  return out;
}

std::vector<double> EstimateStatePriors(const std::vector<std::vector<int>> &alignments,
                                        int num_labels, double floor) {
  std::vector<double> counts(num_labels, 0.0);
  double total = 0.0;
  for (const auto &ali : alignments)
    for (int s : ali) {
      if (s < 0 || s >= num_labels)
        ThrowError(ErrorCode::kInvalidArgument, "label ", s, " out of range");
      counts[s] += 1.0;
      total += 1.0;
    }
  if (total == 0) ThrowError(ErrorCode::kInvalidArgument, "no aligned frames");
  double norm = 0.0;
  for (double &c : counts) {
    c = std::max(c / total, floor);
    norm += c;
  }
  for (double &c : counts) c /= norm;
  return counts;
}

}  // namespace asrlab

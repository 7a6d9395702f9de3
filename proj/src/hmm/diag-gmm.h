// hmm/diag-gmm.h

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

#ifndef ASRLAB_HMM_DIAG_GMM_H_
#define ASRLAB_HMM_DIAG_GMM_H_

#include <span>
#include <vector>

#include "base/matrix.h"

namespace asrlab {

inline constexpr double kDefaultVarFloor = 1e-3;

/// Diagonal-covariance Gaussian mixture: sum_i c_i N(x | mu_i, sigma_i^2).
class DiagGmm {
 public:
  DiagGmm() = default;
  DiagGmm(std::vector<double> weights, Matrix means, Matrix vars);
  /// Single component.
  DiagGmm(std::span<const double> mean, std::span<const double> var);

  std::size_t NumComponents() const { return weights_.size(); }
  std::size_t Dim() const { return means_.NumCols(); }
  const std::vector<double> &Weights() const { return weights_; }
  const Matrix &Means() const { return means_; }
  const Matrix &Vars() const { return vars_; }

  /// log sum_i c_i N(x|...) via log-sum-exp; throws DimensionMismatch.
  double LogDensity(std::span<const double> x) const;
  /// Per-component log(c_i N_i(x)).
  std::vector<double> ComponentLogDensities(std::span<const double> x) const;

  /// Weights non-negative and summing to 1 within 1e-9, variances >= floor.
  void Validate(double var_floor = 0.0) const;

  /// Replaces the heaviest component by two copies with means shifted by
  /// +-perturb*sigma and half the weight each.
  void SplitHeaviest(double perturb = 0.1);

  void SetParameters(std::vector<double> weights, Matrix means, Matrix vars);

 private:
  void Precompute();

  std::vector<double> weights_;
  Matrix means_, vars_;
  std::vector<double> log_consts_;  // log c_i - 0.5 sum_d log(2 pi var)
};

/// Free-function form of DiagGmm::LogDensity.
double GmmLogDensity(std::span<const double> x, const DiagGmm &gmm);

/// Sufficient statistics for one mixture, weighted by occupancy.
class GmmAccumulator {
 public:
  GmmAccumulator() = default;
  GmmAccumulator(std::size_t num_components, std::size_t dim);

  /// Adds frame x with state occupancy `weight`, split over components by
  /// their posterior under `gmm`.
  void Accumulate(const DiagGmm &gmm, std::span<const double> x, double weight);
  /// All occupancy to a single component.
  void AccumulateComponent(std::size_t comp, std::span<const double> x, double weight);
  void Add(const GmmAccumulator &other);

  double TotalOccupancy() const;
  /// Maximum-likelihood update of `gmm`; components without data keep their
  /// Gaussian and get zero weight.  Returns false if there was no data.
  bool Update(DiagGmm *gmm, double var_floor) const;

 private:
  std::vector<double> occ_;
  Matrix sum_, sumsq_;
};

}  // namespace asrlab

#endif  // ASRLAB_HMM_DIAG_GMM_H_

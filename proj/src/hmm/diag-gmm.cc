// hmm/diag-gmm.cc

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

#include "hmm/diag-gmm.h"

#include <algorithm>
#include <cmath>

#include "base/asr-error.h"
#include "base/math-utils.h"

namespace asrlab {

DiagGmm::DiagGmm(std::vector<double> weights, Matrix means, Matrix vars) {
  SetParameters(std::move(weights), std::move(means), std::move(vars));
}

DiagGmm::DiagGmm(std::span<const double> mean, std::span<const double> var) {
  Matrix m(1, mean.size()), v(1, var.size());
  std::copy(mean.begin(), mean.end(), m.Row(0).begin());
  std::copy(var.begin(), var.end(), v.Row(0).begin());
  SetParameters({1.0}, std::move(m), std::move(v));
}

void DiagGmm::SetParameters(std::vector<double> weights, Matrix means, Matrix vars) {
  if (weights.size() != means.NumRows() || means.NumRows() != vars.NumRows() ||
      means.NumCols() != vars.NumCols())
    ThrowError(ErrorCode::kDimensionMismatch, "inconsistent GMM parameter shapes");
  weights_ = std::move(weights);
  means_ = std::move(means);
  vars_ = std::move(vars);
  Precompute();
}

void DiagGmm::Precompute() {
  log_consts_.assign(weights_.size(), 0.0);
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    double c = weights_[i] > 0 ? std::log(weights_[i]) : kLogZero;
    for (double v : vars_.Row(i)) c -= 0.5 * (kLog2Pi + std::log(v));
    log_consts_[i] = c;
  }
}

std::vector<double> DiagGmm::ComponentLogDensities(std::span<const double> x) const {
  if (x.size() != Dim())
    ThrowError(ErrorCode::kDimensionMismatch, "GMM of dim ", Dim(), " given vector of ",
               x.size());
  std::vector<double> out(weights_.size());
  for (std::size_t i = 0; i < weights_.size(); ++i) {
    if (log_consts_[i] == kLogZero) {
      out[i] = kLogZero;
      continue;
    }
    auto mu = means_.Row(i);
    auto var = vars_.Row(i);
    double q = 0.0;
    for (std::size_t d = 0; d < x.size(); ++d) {
      const double diff = x[d] - mu[d];
      q += diff * diff / var[d];
    }
    out[i] = log_consts_[i] - 0.5 * q;
  }
  return out;
}

double DiagGmm::LogDensity(std::span<const double> x) const {
  return LogSumExp(ComponentLogDensities(x));
}

double GmmLogDensity(std::span<const double> x, const DiagGmm &gmm) {
  return gmm.LogDensity(x);
}

void DiagGmm::Validate(double var_floor) const {
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0) ThrowError(ErrorCode::kInvalidArgument, "negative mixture weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    ThrowError(ErrorCode::kInvalidArgument, "mixture weights sum to ", sum);
  for (double v : vars_.Data())
    if (!(v >= var_floor && v > 0))
      ThrowError(ErrorCode::kInvalidArgument, "variance ", v, " below floor ", var_floor);
}

void DiagGmm::SplitHeaviest(double perturb) {
  const auto heavy = static_cast<std::size_t>(
      std::max_element(weights_.begin(), weights_.end()) - weights_.begin());
  const std::size_t k = weights_.size(), dim = Dim();
  std::vector<double> w = weights_;
  Matrix m(k + 1, dim), v(k + 1, dim);
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t d = 0; d < dim; ++d) {
      m(i, d) = means_(i, d);
      v(i, d) = vars_(i, d);
    }
  w[heavy] *= 0.5;
  w.push_back(w[heavy]);
  for (std::size_t d = 0; d < dim; ++d) {
    const double offset = perturb * std::sqrt(vars_(heavy, d));
    m(heavy, d) = means_(heavy, d) + offset;
    m(k, d) = means_(heavy, d) - offset;
    v(k, d) = vars_(heavy, d);
  }
  SetParameters(std::move(w), std::move(m), std::move(v));
}

GmmAccumulator::GmmAccumulator(std::size_t num_components, std::size_t dim)
    : occ_(num_components, 0.0), sum_(num_components, dim), sumsq_(num_components, dim) {}

void GmmAccumulator::AccumulateComponent(std::size_t comp, std::span<const double> x,
                                         double weight) {
  occ_[comp] += weight;
  auto s = sum_.Row(comp);
  auto q = sumsq_.Row(comp);
  for (std::size_t d = 0; d < x.size(); ++d) {
    s[d] += weight * x[d];
    q[d] += weight * x[d] * x[d];
  }
}

void GmmAccumulator::Accumulate(const DiagGmm &gmm, std::span<const double> x,
                                double weight) {
  if (weight <= 0.0) return;
  if (gmm.NumComponents() == 1) {
    AccumulateComponent(0, x, weight);
    return;
  }
  auto comp = gmm.ComponentLogDensities(x);
  const double total = LogSumExp(comp);
  for (std::size_t i = 0; i < comp.size(); ++i) {
    const double post = std::exp(comp[i] - total);
    if (post > 0) AccumulateComponent(i, x, weight * post);
  }
}

void GmmAccumulator::Add(const GmmAccumulator &other) {
  for (std::size_t i = 0; i < occ_.size(); ++i) occ_[i] += other.occ_[i];
  for (std::size_t i = 0; i < sum_.Data().size(); ++i) {
    sum_.Data()[i] += other.sum_.Data()[i];
    sumsq_.Data()[i] += other.sumsq_.Data()[i];
  }
}

double GmmAccumulator::TotalOccupancy() const {
  double total = 0.0;
  for (double o : occ_) total += o;
  return total;
}

bool GmmAccumulator::Update(DiagGmm *gmm, double var_floor) const {
  const double total = TotalOccupancy();
  if (!(total > 0)) return false;
  const std::size_t k = occ_.size(), dim = sum_.NumCols();
  std::vector<double> w(k);
  Matrix m = gmm->Means(), v = gmm->Vars();
  for (std::size_t i = 0; i < k; ++i) {
    w[i] = occ_[i] / total;
    if (occ_[i] < 1e-10) {
      w[i] = 0.0;
      continue;
    }
    for (std::size_t d = 0; d < dim; ++d) {
      const double mean = sum_(i, d) / occ_[i];
      m(i, d) = mean;
      v(i, d) = std::max(sumsq_(i, d) / occ_[i] - mean * mean, var_floor);
    }
  }
  double wsum = 0.0;
  for (double x : w) wsum += x;
  for (double &x : w) x /= wsum;
  gmm->SetParameters(std::move(w), std::move(m), std::move(v));
  return true;
}

}  // namespace asrlab

// nnet/optimizer.h

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

#ifndef ASRLAB_NNET_OPTIMIZER_H_
#define ASRLAB_NNET_OPTIMIZER_H_

#include <string>
#include <vector>

#include "base/rand.h"
#include "nnet/parameters.h"

namespace asrlab::nnet {

struct NadamOptions {
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with Nesterov momentum (constant-momentum form):
///   m = b1 m + (1-b1) g,  v = b2 v + (1-b2) g^2
///   w -= lr (b1 m/(1-b1^t) + (1-b1) g/(1-b1^t)) / (sqrt(v/(1-b2^t)) + eps)
class Nadam {
 public:
  explicit Nadam(NadamOptions opts = {}) : opts_(opts) {}

  /// Updates every tensor in `params` from the matching gradient.
  void Step(std::vector<Tensor *> params, const std::vector<const Tensor *> &grads, double lr);
  /// Applies Step to all parameters of a store that carry a gradient.
  void Step(ParameterStore *ps, double lr);

  long StepCount() const { return step_; }
  const std::vector<Tensor> &FirstMoments() const { return m_; }
  void Reset();

 private:
  NadamOptions opts_;
  long step_ = 0;
  std::vector<Tensor> m_, v_;
};

/// Piecewise learning-rate schedule.  Phases follow one another; each
/// starts from the rate the previous phase ended at.
class LrSchedule {
 public:
  enum class Kind { kWarmup, kHold, kExpDecay, kLinearDecay };
  struct Phase {
    Kind kind;
    long steps;     // < 0: unbounded (last phase only)
    double from;    // warmup start
    double to;      // warmup / linear-decay target
    double factor;  // exp decay per step
    double floor;   // exp decay lower bound
  };

  explicit LrSchedule(double initial_rate = 1e-3);

  LrSchedule &Warmup(double from, double to, long steps);
  LrSchedule &Hold(long steps);
  LrSchedule &ExpDecay(double factor, double floor, long steps = -1);
  LrSchedule &LinearDecay(double to, long steps);

  double Rate(long step) const;
  const std::vector<Phase> &Phases() const { return phases_; }
  double InitialRate() const { return initial_; }
  /// "init=<rate>" followed by the phases in Parse() syntax.
  std::string Describe() const;
  /// Phases only, as accepted by Parse().
  std::string PhaseText() const;

  /// "warmup:1e-5:1e-4:10,hold:5,expdecay:0.9:1e-7".
  static LrSchedule Parse(const std::string &text, double initial_rate = 1e-3);

 private:
  double initial_;
  std::vector<Phase> phases_;
};

/// Adds N(0, (fraction * rms(g))^2) to every element of each gradient
/// tensor, rms taken per tensor.  fraction == 0 leaves gradients untouched.
void AddGradientNoise(const std::vector<Tensor *> &grads, double fraction, Rng *rng);
void AddGradientNoise(ParameterStore *ps, double fraction, Rng *rng);

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_OPTIMIZER_H_

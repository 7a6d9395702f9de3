// base/rand.h

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

#ifndef ASRLAB_BASE_RAND_H_
#define ASRLAB_BASE_RAND_H_

#include <cstdint>
#include <random>

namespace asrlab {

/// Seeded random source shared by every stochastic component.  All sampling
/// goes through one engine so a seed reproduces a run exactly on a given
/// platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : engine_(seed) {}

  double Uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
  double Uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(engine_);
  }
  double Gauss() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
  /// Integer in [0, n).
  int Index(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
  bool Bernoulli(double p) { return Uniform() < p; }
  std::uint64_t Next() { return engine_(); }

  std::mt19937_64 &Engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
};

}  // namespace asrlab

#endif  // ASRLAB_BASE_RAND_H_

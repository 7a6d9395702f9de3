// nnet/parameters.h

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

#ifndef ASRLAB_NNET_PARAMETERS_H_
#define ASRLAB_NNET_PARAMETERS_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "base/rand.h"
#include "nnet/autograd.h"

namespace asrlab::nnet {

enum class ParamRole { kWeight, kBias, kGain, kEmbedding };
enum class InitScheme { kKaiming, kGlorot };

struct ParamSpec {
  std::string name;
  std::vector<int> shape;
  ParamRole role = ParamRole::kWeight;
  int fan_in = 0;
  int fan_out = 0;
};

using Layout = std::vector<ParamSpec>;

/// Number of scalars in a layout, computed without allocating.
std::int64_t CountParameters(const Layout &layout);
std::int64_t CountParameters(const Layout &layout, const std::string &prefix);

InitScheme ParseInitScheme(const std::string &name);
const char *InitSchemeName(InitScheme s);

/// Named parameter tensors, each a gradient-carrying leaf.
class ParameterStore {
 public:
  ParameterStore() = default;
  /// Allocates zero-valued parameters.
  explicit ParameterStore(const Layout &layout);

  /// Kaiming: N(0, 2/fan_in); Glorot: U(+-sqrt(6/(fan_in+fan_out))).
  /// Biases 0, gains 1, embeddings U(0,1).
  void Initialize(InitScheme scheme, Rng *rng);

  bool Has(const std::string &name) const { return index_.count(name) > 0; }
  const Var &Get(const std::string &name) const;
  /// Null when absent.
  Var Find(const std::string &name) const;
  const ParamSpec &Spec(const std::string &name) const;
  const Layout &Specs() const { return specs_; }
  const std::vector<Var> &Values() const { return values_; }

  std::int64_t NumParameters() const;
  void ZeroGrad();
  /// Store over existing leaves (one per layout entry, matching shapes).
  static ParameterStore Bind(const Layout &layout, std::vector<Var> values);
  /// Deep copy of values (gradients are not copied).
  ParameterStore Clone() const;

 private:
  Layout specs_;
  std::vector<Var> values_;
  std::map<std::string, std::size_t> index_;
};

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_PARAMETERS_H_

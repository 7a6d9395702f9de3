// nnet/parameters.cc

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

#include "nnet/parameters.h"

#include <cmath>

#include "base/asr-error.h"

namespace asrlab::nnet {

std::int64_t CountParameters(const Layout &layout) { return CountParameters(layout, ""); }

std::int64_t CountParameters(const Layout &layout, const std::string &prefix) {
  std::int64_t n = 0;
  for (const auto &s : layout)
    if (s.name.compare(0, prefix.size(), prefix) == 0)
      n += static_cast<std::int64_t>(ShapeSize(s.shape));
  return n;
}

InitScheme ParseInitScheme(const std::string &name) {
  if (name == "kaiming") return InitScheme::kKaiming;
  if (name == "glorot") return InitScheme::kGlorot;
  ThrowError(ErrorCode::kInvalidArgument, "unknown init scheme '", name, "'");
}

const char *InitSchemeName(InitScheme s) {
  return s == InitScheme::kKaiming ? "kaiming" : "glorot";
}

ParameterStore::ParameterStore(const Layout &layout) : specs_(layout) {
  for (const auto &s : specs_) {
    if (!index_.emplace(s.name, values_.size()).second)
      ThrowError(ErrorCode::kInvalidArgument, "duplicate parameter '", s.name, "'");
    values_.push_back(Leaf(Tensor(s.shape), true));
  }
}

void ParameterStore::Initialize(InitScheme scheme, Rng *rng) {
  for (std::size_t i = 0; i < specs_.size(); ++i) {
    const ParamSpec &s = specs_[i];
    Tensor &t = values_[i]->value;
    switch (s.role) {
      case ParamRole::kBias:
        t.Fill(0.0);
        break;
      case ParamRole::kGain:
        t.Fill(1.0);
        break;
      case ParamRole::kEmbedding:
        for (double &v : t.Data()) v = rng->Uniform();
        break;
      case ParamRole::kWeight: {
        const double fan_in = std::max(1, s.fan_in), fan_out = std::max(1, s.fan_out);
        if (scheme == InitScheme::kKaiming) {
          const double sd = std::sqrt(2.0 / fan_in);
          for (double &v : t.Data()) v = sd * rng->Gauss();
        } else {
          const double a = std::sqrt(6.0 / (fan_in + fan_out));
          for (double &v : t.Data()) v = rng->Uniform(-a, a);
        }
        break;
      }
    }
  }
}

const Var &ParameterStore::Get(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end()) ThrowError(ErrorCode::kInvalidArgument, "no parameter '", name, "'");
  return values_[it->second];
}

Var ParameterStore::Find(const std::string &name) const {
  auto it = index_.find(name);
  return it == index_.end() ? nullptr : values_[it->second];
}

const ParamSpec &ParameterStore::Spec(const std::string &name) const {
  auto it = index_.find(name);
  if (it == index_.end()) ThrowError(ErrorCode::kInvalidArgument, "no parameter '", name, "'");
  return specs_[it->second];
}

std::int64_t ParameterStore::NumParameters() const { return CountParameters(specs_); }

void ParameterStore::ZeroGrad() {
  for (auto &v : values_)
    if (v->HasGrad()) v->grad.Fill(0.0);
}

ParameterStore ParameterStore::Bind(const Layout &layout, std::vector<Var> values) {
  ParameterStore out(layout);
  if (values.size() != layout.size())
    ThrowError(ErrorCode::kShapeMismatch, "Bind: ", values.size(), " values for ", layout.size(),
               " parameters");
  for (std::size_t i = 0; i < values.size(); ++i)
    if (values[i]->value.Shape() != layout[i].shape)
      ThrowError(ErrorCode::kShapeMismatch, "Bind: '", layout[i].name, "' shape ",
                 values[i]->value.ShapeString());
  out.values_ = std::move(values);
  return out;
}

ParameterStore ParameterStore::Clone() const {
  ParameterStore out(specs_);
  for (std::size_t i = 0; i < values_.size(); ++i) out.values_[i]->value = values_[i]->value;
  return out;
}

}  // namespace asrlab::nnet

// nnet/optimizer.cc

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

#include "nnet/optimizer.h"

#include <cmath>
#include <limits>
#include <sstream>

#include "base/asr-error.h"
#include "base/kv-config.h"

namespace asrlab::nnet {

void Nadam::Step(std::vector<Tensor *> params, const std::vector<const Tensor *> &grads,
                 double lr) {
  if (params.size() != grads.size())
    ThrowError(ErrorCode::kShapeMismatch, "Nadam: ", params.size(), " params vs ", grads.size(),
               " grads");
  if (m_.empty()) {
    for (const Tensor *p : params) {
      m_.emplace_back(p->Shape());
      v_.emplace_back(p->Shape());
    }
  }
  if (m_.size() != params.size())
    ThrowError(ErrorCode::kShapeMismatch, "Nadam: parameter set changed");
  ++step_;
  const double b1 = opts_.beta1, b2 = opts_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(step_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(step_));
  for (std::size_t i = 0; i < params.size(); ++i) {
    Tensor &w = *params[i];
    const Tensor &g = *grads[i];
    if (g.Size() != w.Size() || m_[i].Size() != w.Size())
      ThrowError(ErrorCode::kShapeMismatch, "Nadam: gradient ", g.ShapeString(), " for parameter ",
                 w.ShapeString());
    for (std::size_t j = 0; j < w.Size(); ++j) {
      double &m = m_[i][j];
      double &v = v_[i][j];
      m = b1 * m + (1.0 - b1) * g[j];
      v = b2 * v + (1.0 - b2) * g[j] * g[j];
      const double mhat = (b1 * m + (1.0 - b1) * g[j]) / c1;
      w[j] -= lr * mhat / (std::sqrt(v / c2) + opts_.epsilon);
    }
  }
}

void Nadam::Step(ParameterStore *ps, double lr) {
  std::vector<Tensor *> params;
  std::vector<const Tensor *> grads;
  std::vector<Tensor> zeros;
  zeros.reserve(ps->Values().size());
  for (const auto &v : ps->Values()) {
    params.push_back(&v->value);
    if (v->HasGrad()) {
      grads.push_back(&v->grad);
    } else {
      zeros.emplace_back(v->value.Shape());
      grads.push_back(&zeros.back());
    }
  }
  Step(std::move(params), grads, lr);
}

void Nadam::Reset() {
  step_ = 0;
  m_.clear();
  v_.clear();
}

LrSchedule::LrSchedule(double initial_rate) : initial_(initial_rate) {
  if (!(initial_rate > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "learning rate must be > 0");
}

LrSchedule &LrSchedule::Warmup(double from, double to, long steps) {
  if (!(from > 0.0) || !(to > 0.0) || steps < 1)
    ThrowError(ErrorCode::kInvalidArgument, "warmup needs positive rates and steps");
  phases_.push_back({Kind::kWarmup, steps, from, to, 0.0, 0.0});
  return *this;
}

LrSchedule &LrSchedule::Hold(long steps) {
  if (steps < 0) ThrowError(ErrorCode::kInvalidArgument, "hold needs steps >= 0");
  phases_.push_back({Kind::kHold, steps, 0.0, 0.0, 0.0, 0.0});
  return *this;
}

LrSchedule &LrSchedule::ExpDecay(double factor, double floor, long steps) {
  if (!(factor > 0.0 && factor < 1.0))
    ThrowError(ErrorCode::kInvalidArgument, "decay factor must be in (0,1), got ", factor);
  if (!(floor > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "decay floor must be > 0");
  phases_.push_back({Kind::kExpDecay, steps, 0.0, 0.0, factor, floor});
  return *this;
}

LrSchedule &LrSchedule::LinearDecay(double to, long steps) {
  if (!(to > 0.0) || steps < 1)
    ThrowError(ErrorCode::kInvalidArgument, "linear decay needs positive target and steps");
  phases_.push_back({Kind::kLinearDecay, steps, 0.0, to, 0.0, 0.0});
  return *this;
}

double LrSchedule::Rate(long step) const {
  if (step < 0) ThrowError(ErrorCode::kInvalidArgument, "negative schedule step");
  double rate = initial_;
  long start = 0;
  for (const Phase &ph : phases_) {
    const bool bounded = ph.steps >= 0;
    const long local = step - start;
    const bool inside = !bounded || local < ph.steps;
    const long n = inside ? local : ph.steps;
    switch (ph.kind) {
      case Kind::kWarmup:
        rate = inside ? ph.from + (ph.to - ph.from) * static_cast<double>(n) / ph.steps : ph.to;
        break;
      case Kind::kHold:
        break;
      case Kind::kExpDecay:
        rate = std::max(ph.floor, rate * std::pow(ph.factor, static_cast<double>(n)));
        break;
      case Kind::kLinearDecay:
        rate = inside ? rate + (ph.to - rate) * static_cast<double>(n) / ph.steps : ph.to;
        break;
    }
    if (inside) return rate;
    start += ph.steps;
  }
  return rate;
}

std::string LrSchedule::PhaseText() const {
  const std::string d = Describe();
  const auto comma = d.find(',');
  return comma == std::string::npos ? "" : d.substr(comma + 1);
}

std::string LrSchedule::Describe() const {
  std::ostringstream os;
  os << "init=" << FormatDouble(initial_);
  for (const Phase &ph : phases_) {
    switch (ph.kind) {
      case Kind::kWarmup:
        os << ",warmup:" << FormatDouble(ph.from) << ':' << FormatDouble(ph.to) << ':' << ph.steps;
        break;
      case Kind::kHold:
        os << ",hold:" << ph.steps;
        break;
      case Kind::kExpDecay:
        os << ",expdecay:" << FormatDouble(ph.factor) << ':' << FormatDouble(ph.floor);
        if (ph.steps >= 0) os << ':' << ph.steps;
        break;
      case Kind::kLinearDecay:
        os << ",lineardecay:" << FormatDouble(ph.to) << ':' << ph.steps;
        break;
    }
  }
  return os.str();
}

LrSchedule LrSchedule::Parse(const std::string &text, double initial_rate) {
  LrSchedule s(initial_rate);
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::vector<std::string> f;
    std::stringstream is(item);
    std::string tok;
    while (std::getline(is, tok, ':')) f.push_back(tok);
    try {
      if (f[0] == "warmup" && f.size() == 4) {
        s.Warmup(std::stod(f[1]), std::stod(f[2]), std::stol(f[3]));
      } else if (f[0] == "hold" && f.size() == 2) {
        s.Hold(std::stol(f[1]));
      } else if (f[0] == "expdecay" && (f.size() == 3 || f.size() == 4)) {
        s.ExpDecay(std::stod(f[1]), std::stod(f[2]), f.size() == 4 ? std::stol(f[3]) : -1);
      } else if (f[0] == "lineardecay" && f.size() == 3) {
        s.LinearDecay(std::stod(f[1]), std::stol(f[2]));
      } else {
        ThrowError(ErrorCode::kFormatError, "bad schedule phase '", item, "'");
      }
    } catch (const std::logic_error &) {
      ThrowError(ErrorCode::kFormatError, "bad number in schedule phase '", item, "'");
    }
  }
  return s;
}

void AddGradientNoise(const std::vector<Tensor *> &grads, double fraction, Rng *rng) {
  if (fraction < 0.0) ThrowError(ErrorCode::kInvalidArgument, "noise fraction ", fraction);
  if (fraction == 0.0) return;
  for (Tensor *g : grads) {
    if (g->Size() == 0) continue;
    const double rms = std::sqrt(g->SumSquares() / static_cast<double>(g->Size()));
    const double sd = fraction * rms;
    for (double &v : g->Data()) v += sd * rng->Gauss();
  }
}

void AddGradientNoise(ParameterStore *ps, double fraction, Rng *rng) {
  std::vector<Tensor *> grads;
  for (const auto &v : ps->Values())
    if (v->HasGrad()) grads.push_back(&v->grad);
  AddGradientNoise(grads, fraction, rng);
}

}  // namespace asrlab::nnet

// nnet/tensor.cc

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

#include "nnet/tensor.h"

#include <algorithm>
#include <sstream>

#include "base/asr-error.h"

namespace asrlab::nnet {

std::size_t ShapeSize(const std::vector<int> &shape) {
  std::size_t n = 1;
  for (int d : shape) {
    if (d < 0) ThrowError(ErrorCode::kShapeMismatch, "negative dimension");
    n *= static_cast<std::size_t>(d);
  }
  return n;
}

Tensor::Tensor(std::vector<int> shape, double fill)
    : shape_(std::move(shape)), data_(ShapeSize(shape_), fill) {}

Tensor::Tensor(std::vector<int> shape, std::vector<double> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (data_.size() != ShapeSize(shape_))
    ThrowError(ErrorCode::kShapeMismatch, "data length ", data_.size(), " does not match shape ",
               ShapeString());
}

void Tensor::Fill(double v) { std::fill(data_.begin(), data_.end(), v); }

void Tensor::AddScaled(const Tensor &other, double alpha) {
  if (other.Size() != Size())
    ThrowError(ErrorCode::kShapeMismatch, "AddScaled: ", ShapeString(), " vs ",
               other.ShapeString());
  for (std::size_t i = 0; i < data_.size(); ++i) data_[i] += alpha * other.data_[i];
}

double Tensor::SumSquares() const {
  double s = 0.0;
  for (double v : data_) s += v * v;
  return s;
}

std::string Tensor::ShapeString() const {
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape_.size(); ++i) os << (i ? "," : "") << shape_[i];
  os << ']';
  return os.str();
}

}  // namespace asrlab::nnet

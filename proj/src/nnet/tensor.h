// nnet/tensor.h

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

#ifndef ASRLAB_NNET_TENSOR_H_
#define ASRLAB_NNET_TENSOR_H_

#include <span>
#include <string>
#include <vector>

namespace asrlab::nnet {

/// Dense row-major array of doubles with an explicit shape.  Most values
/// are matrices [rows, cols]; conv kernels are [k, cin, cout].
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::vector<int> shape, double fill = 0.0);
  Tensor(std::vector<int> shape, std::vector<double> data);
  static Tensor Scalar(double v) { return Tensor({1, 1}, v); }

  const std::vector<int> &Shape() const { return shape_; }
  int Rank() const { return static_cast<int>(shape_.size()); }
  int Dim(int i) const { return shape_.at(i); }
  /// Rows/cols of a rank-2 tensor.
  int Rows() const { return shape_[0]; }
  int Cols() const { return shape_[1]; }
  std::size_t Size() const { return data_.size(); }
  bool Empty() const { return data_.empty(); }

  double &operator[](std::size_t i) { return data_[i]; }
  double operator[](std::size_t i) const { return data_[i]; }
  double &operator()(int r, int c) { return data_[static_cast<std::size_t>(r) * shape_[1] + c]; }
  double operator()(int r, int c) const {
    return data_[static_cast<std::size_t>(r) * shape_[1] + c];
  }
  std::span<double> Row(int r) {
    return {data_.data() + static_cast<std::size_t>(r) * shape_[1], static_cast<std::size_t>(shape_[1])};
  }
  std::span<const double> Row(int r) const {
    return {data_.data() + static_cast<std::size_t>(r) * shape_[1], static_cast<std::size_t>(shape_[1])};
  }
  std::vector<double> &Data() { return data_; }
  const std::vector<double> &Data() const { return data_; }

  void Fill(double v);
  /// this += alpha * other (same size).
  void AddScaled(const Tensor &other, double alpha = 1.0);
  double SumSquares() const;

  bool operator==(const Tensor &o) const { return shape_ == o.shape_ && data_ == o.data_; }

  std::string ShapeString() const;

 private:
  std::vector<int> shape_;
  std::vector<double> data_;
};

std::size_t ShapeSize(const std::vector<int> &shape);

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_TENSOR_H_

// base/matrix.h

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

#ifndef ASRLAB_BASE_MATRIX_H_
#define ASRLAB_BASE_MATRIX_H_

#include <cstddef>
#include <span>
#include <vector>

namespace asrlab {

/// Dense row-major matrix of doubles.  Rows are exposed as spans so that
/// frame-level code can work on one observation vector at a time.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t NumRows() const { return rows_; }
  std::size_t NumCols() const { return cols_; }
  bool Empty() const { return data_.empty(); }

  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  std::span<double> Row(std::size_t r) {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<const double> Row(std::size_t r) const {
    return {data_.data() + r * cols_, cols_};
  }

  std::vector<double> &Data() { return data_; }
  const std::vector<double> &Data() const { return data_; }

  void Resize(std::size_t rows, std::size_t cols, double fill = 0.0);
  void AppendRow(std::span<const double> row);
  Matrix Transpose() const;

  bool operator==(const Matrix &other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// out = a * b.
Matrix MatMul(const Matrix &a, const Matrix &b);

}  // namespace asrlab

#endif  // ASRLAB_BASE_MATRIX_H_

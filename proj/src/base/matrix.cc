// base/matrix.cc

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

#include "base/matrix.h"

#include "base/asr-error.h"

namespace asrlab {

void Matrix::Resize(std::size_t rows, std::size_t cols, double fill) {
  rows_ = rows;
  cols_ = cols;
  data_.assign(rows * cols, fill);
}

void Matrix::AppendRow(std::span<const double> row) {
  if (rows_ == 0 && cols_ == 0) cols_ = row.size();
  if (row.size() != cols_)
    ThrowError(ErrorCode::kDimensionMismatch, "row of size ", row.size(),
               " appended to matrix with ", cols_, " columns");
  data_.insert(data_.end(), row.begin(), row.end());
  ++rows_;
}

Matrix Matrix::Transpose() const {
  Matrix out(cols_, rows_);
  for (std::size_t r = 0; r < rows_; ++r)
    for (std::size_t c = 0; c < cols_; ++c) out(c, r) = (*this)(r, c);
  return out;
}

Matrix MatMul(const Matrix &a, const Matrix &b) {
  if (a.NumCols() != b.NumRows())
    ThrowError(ErrorCode::kDimensionMismatch, "MatMul ", a.NumRows(), "x",
               a.NumCols(), " by ", b.NumRows(), "x", b.NumCols());
  Matrix out(a.NumRows(), b.NumCols());
  for (std::size_t i = 0; i < a.NumRows(); ++i)
    for (std::size_t k = 0; k < a.NumCols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.Row(k);
      auto orow = out.Row(i);
      for (std::size_t j = 0; j < b.NumCols(); ++j) orow[j] += aik * brow[j];
    }
  return out;
}

}  // namespace asrlab

// nnet/ops.cc

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

#include "nnet/ops.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "base/asr-error.h"

namespace asrlab::nnet {

namespace {

void RequireRank2(const Tensor &t, const char *op) {
  if (t.Rank() != 2)
    ThrowError(ErrorCode::kShapeMismatch, op, ": expected rank 2, got ", t.ShapeString());
}

void RequireSameShape(const Tensor &a, const Tensor &b, const char *op) {
  if (a.Shape() != b.Shape())
    ThrowError(ErrorCode::kShapeMismatch, op, ": ", a.ShapeString(), " vs ", b.ShapeString());
}

void RequireVector(const Tensor &v, int m, const char *op) {
  if (static_cast<int>(v.Size()) != m || (v.Rank() == 2 && v.Rows() != 1) || v.Rank() > 2)
    ThrowError(ErrorCode::kShapeMismatch, op, ": vector ", v.ShapeString(), " needs length ", m);
}

// C[n,m] += op(A)[n,k] op(B)[k,m] on raw strided storage.
void GemmRaw(int n, int k, int m, const double *a, int lda, bool ta, const double *b, int ldb,
             bool tb, double *c, int ldc) {
  std::vector<double> bt;
  if (tb) {
    // make B row-major [k, m] so the inner loop is contiguous
    bt.resize(static_cast<std::size_t>(k) * m);
    for (int j = 0; j < m; ++j)
      for (int p = 0; p < k; ++p) bt[static_cast<std::size_t>(p) * m + j] = b[static_cast<std::size_t>(j) * ldb + p];
    b = bt.data();
    ldb = m;
  }
  for (int i = 0; i < n; ++i) {
    double *__restrict crow = c + static_cast<std::size_t>(i) * ldc;
    for (int p = 0; p < k; ++p) {
      const double av = ta ? a[static_cast<std::size_t>(p) * lda + i] : a[static_cast<std::size_t>(i) * lda + p];
      if (av == 0.0) continue;
      const double *__restrict brow = b + static_cast<std::size_t>(p) * ldb;
      for (int j = 0; j < m; ++j) crow[j] += av * brow[j];
    }
  }
}

// out[n,m] += a[n,k] b[k,m] with optional transposes.
void Gemm(const Tensor &a, bool ta, const Tensor &b, bool tb, Tensor *out) {
  const int n = ta ? a.Cols() : a.Rows();
  const int k = ta ? a.Rows() : a.Cols();
  const int m = tb ? b.Rows() : b.Cols();
  GemmRaw(n, k, m, a.Data().data(), a.Cols(), ta, b.Data().data(), b.Cols(), tb,
          out->Data().data(), m);
}

template <typename F, typename D>
Var Elementwise(const Var &x, F f, D dfdx) {
  Tensor y(x->value.Shape());
  for (std::size_t i = 0; i < y.Size(); ++i) y[i] = f(x->value[i]);
  return MakeOp(std::move(y), {x}, [x, dfdx](Node &n) {
    Tensor &g = x->Grad();
    for (std::size_t i = 0; i < g.Size(); ++i)
      g[i] += n.grad[i] * dfdx(x->value[i], n.value[i]);
  });
}

void SoftmaxRows(const Tensor &x, Tensor *y, bool log_space) {
  for (int r = 0; r < x.Rows(); ++r) {
    auto in = x.Row(r);
    auto out = y->Row(r);
    const double mx = *std::max_element(in.begin(), in.end());
    double s = 0.0;
    for (double v : in) s += std::exp(v - mx);
    const double lse = mx + std::log(s);
    for (std::size_t j = 0; j < in.size(); ++j)
      out[j] = log_space ? in[j] - lse : std::exp(in[j] - lse);
  }
}

void CheckLabels(const Tensor &logits, const std::vector<int> &labels, const char *op) {
  RequireRank2(logits, op);
  if (static_cast<int>(labels.size()) != logits.Rows())
    ThrowError(ErrorCode::kShapeMismatch, op, ": ", labels.size(), " labels for ",
               logits.Rows(), " rows");
  for (int l : labels)
    if (l < 0 || l >= logits.Cols())
      ThrowError(ErrorCode::kShapeMismatch, op, ": label ", l, " out of range");
}

}  // namespace

Var MatMul(const Var &a, const Var &b) {
  RequireRank2(a->value, "MatMul");
  RequireRank2(b->value, "MatMul");
  if (a->value.Cols() != b->value.Rows())
    ThrowError(ErrorCode::kShapeMismatch, "MatMul: ", a->value.ShapeString(), " x ",
               b->value.ShapeString());
  Tensor y({a->value.Rows(), b->value.Cols()});
  Gemm(a->value, false, b->value, false, &y);
  return MakeOp(std::move(y), {a, b}, [a, b](Node &n) {
    if (a->requires_grad) Gemm(n.grad, false, b->value, true, &a->Grad());
    if (b->requires_grad) Gemm(a->value, true, n.grad, false, &b->Grad());
  });
}

Var Transpose(const Var &a) {
  RequireRank2(a->value, "Transpose");
  const int r = a->value.Rows(), c = a->value.Cols();
  Tensor y({c, r});
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) y(j, i) = a->value(i, j);
  return MakeOp(std::move(y), {a}, [a, r, c](Node &n) {
    Tensor &g = a->Grad();
    for (int i = 0; i < r; ++i)
      for (int j = 0; j < c; ++j) g(i, j) += n.grad(j, i);
  });
}

Var Linear(const Var &x, const Var &w, const Var &b) {
  Var y = MatMul(x, w);
  return b ? AddRowVector(y, b) : y;
}

Var Add(const Var &a, const Var &b) {
  RequireSameShape(a->value, b->value, "Add");
  Tensor y = a->value;
  y.AddScaled(b->value);
  return MakeOp(std::move(y), {a, b}, [a, b](Node &n) {
    if (a->requires_grad) a->Grad().AddScaled(n.grad);
    if (b->requires_grad) b->Grad().AddScaled(n.grad);
  });
}

Var Sub(const Var &a, const Var &b) {
  RequireSameShape(a->value, b->value, "Sub");
  Tensor y = a->value;
  y.AddScaled(b->value, -1.0);
  return MakeOp(std::move(y), {a, b}, [a, b](Node &n) {
    if (a->requires_grad) a->Grad().AddScaled(n.grad);
    if (b->requires_grad) b->Grad().AddScaled(n.grad, -1.0);
  });
}

Var Mul(const Var &a, const Var &b) {
  RequireSameShape(a->value, b->value, "Mul");
  Tensor y = a->value;
  for (std::size_t i = 0; i < y.Size(); ++i) y[i] *= b->value[i];
  return MakeOp(std::move(y), {a, b}, [a, b](Node &n) {
    if (a->requires_grad) {
      Tensor &g = a->Grad();
      for (std::size_t i = 0; i < g.Size(); ++i) g[i] += n.grad[i] * b->value[i];
    }
    if (b->requires_grad) {
      Tensor &g = b->Grad();
      for (std::size_t i = 0; i < g.Size(); ++i) g[i] += n.grad[i] * a->value[i];
    }
  });
}

Var Scale(const Var &a, double s) {
  Tensor y = a->value;
  for (double &v : y.Data()) v *= s;
  return MakeOp(std::move(y), {a}, [a, s](Node &n) { a->Grad().AddScaled(n.grad, s); });
}

Var AddRowVector(const Var &x, const Var &v) {
  RequireRank2(x->value, "AddRowVector");
  const int rows = x->value.Rows(), cols = x->value.Cols();
  RequireVector(v->value, cols, "AddRowVector");
  Tensor y = x->value;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) y(r, c) += v->value[c];
  return MakeOp(std::move(y), {x, v}, [x, v, rows, cols](Node &n) {
    if (x->requires_grad) x->Grad().AddScaled(n.grad);
    if (v->requires_grad) {
      Tensor &g = v->Grad();
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g[c] += n.grad(r, c);
    }
  });
}

Var Relu(const Var &x) {
  return Elementwise(
      x, [](double v) { return v > 0.0 ? v : 0.0; },
      [](double v, double) { return v > 0.0 ? 1.0 : 0.0; });
}

Var Gelu(const Var &x) {
  return Elementwise(
      x, [](double v) { return 0.5 * v * (1.0 + std::erf(v / std::numbers::sqrt2)); },
      [](double v, double) {
        const double cdf = 0.5 * (1.0 + std::erf(v / std::numbers::sqrt2));
        const double pdf = std::exp(-0.5 * v * v) * 0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2;
        return cdf + v * pdf;
      });
}

Var Tanh(const Var &x) {
  return Elementwise(
      x, [](double v) { return std::tanh(v); }, [](double, double y) { return 1.0 - y * y; });
}

Var Sigmoid(const Var &x) {
  return Elementwise(
      x,
      [](double v) {
        if (v >= 0) return 1.0 / (1.0 + std::exp(-v));
        const double e = std::exp(v);
        return e / (1.0 + e);
      },
      [](double, double y) { return y * (1.0 - y); });
}

Var Exp(const Var &x) {
  return Elementwise(
      x, [](double v) { return std::exp(v); }, [](double, double y) { return y; });
}

Var Log(const Var &x) {
  return Elementwise(
      x, [](double v) { return std::log(v); }, [](double v, double) { return 1.0 / v; });
}

Var LayerNorm(const Var &x, const Var &gain, const Var &bias, double eps) {
  RequireRank2(x->value, "LayerNorm");
  const int rows = x->value.Rows(), cols = x->value.Cols();
  if (gain) RequireVector(gain->value, cols, "LayerNorm");
  if (bias) RequireVector(bias->value, cols, "LayerNorm");
  Tensor xhat({rows, cols});
  std::vector<double> inv_sd(rows);
  for (int r = 0; r < rows; ++r) {
    auto in = x->value.Row(r);
    double mean = 0.0;
    for (double v : in) mean += v;
    mean /= cols;
    double var = 0.0;
    for (double v : in) var += (v - mean) * (v - mean);
    var /= cols;
    inv_sd[r] = 1.0 / std::sqrt(var + eps);
    for (int c = 0; c < cols; ++c) xhat(r, c) = (in[c] - mean) * inv_sd[r];
  }
  Tensor y = xhat;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      if (gain) y(r, c) *= gain->value[c];
      if (bias) y(r, c) += bias->value[c];
    }
  std::vector<Var> parents{x};
  if (gain) parents.push_back(gain);
  if (bias) parents.push_back(bias);
  return MakeOp(std::move(y), parents, [x, gain, bias, xhat, inv_sd, rows, cols](Node &n) {
    if (gain && gain->requires_grad) {
      Tensor &g = gain->Grad();
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g[c] += n.grad(r, c) * xhat(r, c);
    }
    if (bias && bias->requires_grad) {
      Tensor &g = bias->Grad();
      for (int r = 0; r < rows; ++r)
        for (int c = 0; c < cols; ++c) g[c] += n.grad(r, c);
    }
    if (!x->requires_grad) return;
    Tensor &gx = x->Grad();
    std::vector<double> dxhat(cols);
    for (int r = 0; r < rows; ++r) {
      double mean_d = 0.0, mean_dx = 0.0;
      for (int c = 0; c < cols; ++c) {
        dxhat[c] = n.grad(r, c) * (gain ? gain->value[c] : 1.0);
        mean_d += dxhat[c];
        mean_dx += dxhat[c] * xhat(r, c);
      }
      mean_d /= cols;
      mean_dx /= cols;
      for (int c = 0; c < cols; ++c)
        gx(r, c) += inv_sd[r] * (dxhat[c] - mean_d - xhat(r, c) * mean_dx);
    }
  });
}

Var Conv1d(const Var &x, const Var &kernel, const Var &bias, int stride, int padding,
           int groups) {
  RequireRank2(x->value, "Conv1d");
  const Tensor &kw = kernel->value;
  if (kw.Rank() != 3)
    ThrowError(ErrorCode::kShapeMismatch, "Conv1d: kernel must be rank 3, got ", kw.ShapeString());
  if (stride < 1 || padding < 0 || groups < 1)
    ThrowError(ErrorCode::kInvalidArgument, "Conv1d: bad stride/padding/groups");
  const int t_in = x->value.Rows(), cin = x->value.Cols();
  const int k = kw.Dim(0), cin_g = kw.Dim(1), cout = kw.Dim(2);
  if (cin % groups != 0 || cout % groups != 0 || cin_g * groups != cin)
    ThrowError(ErrorCode::kShapeMismatch, "Conv1d: kernel ", kw.ShapeString(), " vs input ",
               x->value.ShapeString(), " groups ", groups);
  if (bias) RequireVector(bias->value, cout, "Conv1d");
  if (t_in + 2 * padding < k)
    ThrowError(ErrorCode::kTooShort, "Conv1d: input length ", t_in, " shorter than kernel ", k);
  const int t_out = (t_in + 2 * padding - k) / stride + 1;
  const int cout_g = cout / groups;
  const int width = k * cin_g;
  // im2col per group: patches[g] is [t_out, k * cin_g], row (j, ci) order
  // matching the kernel's leading dimensions
  auto patches = std::make_shared<std::vector<Tensor>>();
  for (int g = 0; g < groups; ++g) {
    Tensor p({t_out, width});
    for (int t = 0; t < t_out; ++t) {
      double *row = p.Row(t).data();
      for (int j = 0; j < k; ++j) {
        const int src = t * stride + j - padding;
        if (src < 0 || src >= t_in) continue;
        const double *in = x->value.Row(src).data() + g * cin_g;
        std::copy_n(in, cin_g, row + j * cin_g);
      }
    }
    patches->push_back(std::move(p));
  }
  Tensor y({t_out, cout});
  if (bias)
    for (int t = 0; t < t_out; ++t)
      for (int co = 0; co < cout; ++co) y(t, co) = bias->value[co];
  for (int g = 0; g < groups; ++g)
    GemmRaw(t_out, width, cout_g, (*patches)[g].Data().data(), width, false,
            kw.Data().data() + g * cout_g, cout, false, y.Data().data() + g * cout_g, cout);
  std::vector<Var> parents{x, kernel};
  if (bias) parents.push_back(bias);
  return MakeOp(std::move(y), parents, [=](Node &n) {
    const double *gy = n.grad.Data().data();
    if (bias && bias->requires_grad) {
      Tensor &gb = bias->Grad();
      for (int t = 0; t < t_out; ++t)
        for (int co = 0; co < cout; ++co) gb[co] += n.grad(t, co);
    }
    if (kernel->requires_grad) {
      double *gk = kernel->Grad().Data().data();
      for (int g = 0; g < groups; ++g)
        GemmRaw(width, t_out, cout_g, (*patches)[g].Data().data(), width, true, gy + g * cout_g,
                cout, false, gk + g * cout_g, cout);
    }
    if (x->requires_grad) {
      Tensor &gx = x->Grad();
      Tensor dp({t_out, width});
      for (int g = 0; g < groups; ++g) {
        dp.Fill(0.0);
        GemmRaw(t_out, cout_g, width, gy + g * cout_g, cout, false,
                kernel->value.Data().data() + g * cout_g, cout, true, dp.Data().data(), width);
        for (int t = 0; t < t_out; ++t) {
          const double *row = dp.Row(t).data();
          for (int j = 0; j < k; ++j) {
            const int src = t * stride + j - padding;
            if (src < 0 || src >= t_in) continue;
            double *out = gx.Row(src).data() + g * cin_g;
            for (int ci = 0; ci < cin_g; ++ci) out[ci] += row[j * cin_g + ci];
          }
        }
      }
    }
  });
}

Var Softmax(const Var &x) {
  RequireRank2(x->value, "Softmax");
  Tensor y(x->value.Shape());
  SoftmaxRows(x->value, &y, false);
  return MakeOp(std::move(y), {x}, [x](Node &n) {
    Tensor &g = x->Grad();
    for (int r = 0; r < n.value.Rows(); ++r) {
      auto yr = n.value.Row(r);
      auto gr = n.grad.Row(r);
      double dot = 0.0;
      for (std::size_t j = 0; j < yr.size(); ++j) dot += gr[j] * yr[j];
      for (std::size_t j = 0; j < yr.size(); ++j) g(r, j) += yr[j] * (gr[j] - dot);
    }
  });
}

Var LogSoftmax(const Var &x) {
  RequireRank2(x->value, "LogSoftmax");
  Tensor y(x->value.Shape());
  SoftmaxRows(x->value, &y, true);
  return MakeOp(std::move(y), {x}, [x](Node &n) {
    Tensor &g = x->Grad();
    for (int r = 0; r < n.value.Rows(); ++r) {
      auto yr = n.value.Row(r);
      auto gr = n.grad.Row(r);
      double total = 0.0;
      for (double v : gr) total += v;
      for (std::size_t j = 0; j < yr.size(); ++j) g(r, j) += gr[j] - std::exp(yr[j]) * total;
    }
  });
}

Var SliceRows(const Var &x, int start, int count) {
  RequireRank2(x->value, "SliceRows");
  const int cols = x->value.Cols();
  if (start < 0 || count < 0 || start + count > x->value.Rows())
    ThrowError(ErrorCode::kShapeMismatch, "SliceRows: [", start, ",+", count, ") of ",
               x->value.ShapeString());
  const auto first = x->value.Data().begin() + static_cast<std::ptrdiff_t>(start) * cols;
  Tensor y({count, cols}, std::vector<double>(first, first + static_cast<std::ptrdiff_t>(count) * cols));
  return MakeOp(std::move(y), {x}, [x, start, cols](Node &n) {
    Tensor &g = x->Grad();
    const std::size_t off = static_cast<std::size_t>(start) * cols;
    for (std::size_t i = 0; i < n.grad.Size(); ++i) g[off + i] += n.grad[i];
  });
}

Var SliceCols(const Var &x, int start, int count) {
  RequireRank2(x->value, "SliceCols");
  const int rows = x->value.Rows();
  if (start < 0 || count < 0 || start + count > x->value.Cols())
    ThrowError(ErrorCode::kShapeMismatch, "SliceCols: [", start, ",+", count, ") of ",
               x->value.ShapeString());
  Tensor y({rows, count});
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < count; ++c) y(r, c) = x->value(r, start + c);
  return MakeOp(std::move(y), {x}, [x, start, rows, count](Node &n) {
    Tensor &g = x->Grad();
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < count; ++c) g(r, start + c) += n.grad(r, c);
  });
}

Var ConcatRows(const std::vector<Var> &parts) {
  ASR_ASSERT(!parts.empty());
  const int cols = parts[0]->value.Cols();
  int rows = 0;
  for (const auto &p : parts) {
    RequireRank2(p->value, "ConcatRows");
    if (p->value.Cols() != cols)
      ThrowError(ErrorCode::kShapeMismatch, "ConcatRows: column mismatch");
    rows += p->value.Rows();
  }
  std::vector<double> data;
  data.reserve(static_cast<std::size_t>(rows) * cols);
  for (const auto &p : parts) data.insert(data.end(), p->value.Data().begin(), p->value.Data().end());
  return MakeOp(Tensor({rows, cols}, std::move(data)), parts, [parts](Node &n) {
    std::size_t off = 0;
    for (const auto &p : parts) {
      if (p->requires_grad) {
        Tensor &g = p->Grad();
        for (std::size_t i = 0; i < g.Size(); ++i) g[i] += n.grad[off + i];
      }
      off += p->value.Size();
    }
  });
}

Var ConcatCols(const std::vector<Var> &parts) {
  ASR_ASSERT(!parts.empty());
  const int rows = parts[0]->value.Rows();
  int cols = 0;
  for (const auto &p : parts) {
    RequireRank2(p->value, "ConcatCols");
    if (p->value.Rows() != rows) ThrowError(ErrorCode::kShapeMismatch, "ConcatCols: row mismatch");
    cols += p->value.Cols();
  }
  Tensor y({rows, cols});
  int off = 0;
  for (const auto &p : parts) {
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < p->value.Cols(); ++c) y(r, off + c) = p->value(r, c);
    off += p->value.Cols();
  }
  return MakeOp(std::move(y), parts, [parts, rows](Node &n) {
    int off = 0;
    for (const auto &p : parts) {
      const int pc = p->value.Cols();
      if (p->requires_grad) {
        Tensor &g = p->Grad();
        for (int r = 0; r < rows; ++r)
          for (int c = 0; c < pc; ++c) g(r, c) += n.grad(r, off + c);
      }
      off += pc;
    }
  });
}

Var GatherRows(const Var &x, const std::vector<int> &rows) {
  RequireRank2(x->value, "GatherRows");
  const int cols = x->value.Cols();
  Tensor y({static_cast<int>(rows.size()), cols});
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] < 0 || rows[i] >= x->value.Rows())
      ThrowError(ErrorCode::kShapeMismatch, "GatherRows: index ", rows[i], " out of range");
    std::copy_n(x->value.Row(rows[i]).begin(), cols, y.Row(static_cast<int>(i)).begin());
  }
  return MakeOp(std::move(y), {x}, [x, rows, cols](Node &n) {
    Tensor &g = x->Grad();
    for (std::size_t i = 0; i < rows.size(); ++i)
      for (int c = 0; c < cols; ++c) g(rows[i], c) += n.grad(static_cast<int>(i), c);
  });
}

Var GatherCols(const Var &x, const std::vector<std::vector<int>> &idx) {
  RequireRank2(x->value, "GatherCols");
  const int rows = x->value.Rows();
  if (static_cast<int>(idx.size()) != rows)
    ThrowError(ErrorCode::kShapeMismatch, "GatherCols: index rows ", idx.size(), " vs ", rows);
  const int k = rows ? static_cast<int>(idx[0].size()) : 0;
  Tensor y({rows, k});
  for (int r = 0; r < rows; ++r) {
    if (static_cast<int>(idx[r].size()) != k)
      ThrowError(ErrorCode::kShapeMismatch, "GatherCols: ragged index");
    for (int j = 0; j < k; ++j) {
      const int c = idx[r][j];
      if (c < 0 || c >= x->value.Cols())
        ThrowError(ErrorCode::kShapeMismatch, "GatherCols: index ", c, " out of range");
      y(r, j) = x->value(r, c);
    }
  }
  return MakeOp(std::move(y), {x}, [x, idx, rows, k](Node &n) {
    Tensor &g = x->Grad();
    for (int r = 0; r < rows; ++r)
      for (int j = 0; j < k; ++j) g(r, idx[r][j]) += n.grad(r, j);
  });
}

Var ReverseRows(const Var &x) {
  RequireRank2(x->value, "ReverseRows");
  std::vector<int> rows(x->value.Rows());
  for (int i = 0; i < x->value.Rows(); ++i) rows[i] = x->value.Rows() - 1 - i;
  return GatherRows(x, rows);
}

Var RowL2Normalize(const Var &x) {
  RequireRank2(x->value, "RowL2Normalize");
  const int rows = x->value.Rows(), cols = x->value.Cols();
  Tensor y = x->value;
  std::vector<double> norms(rows);
  for (int r = 0; r < rows; ++r) {
    double s = 0.0;
    for (double v : x->value.Row(r)) s += v * v;
    norms[r] = std::sqrt(s);
    if (norms[r] < 1e-12)
      ThrowError(ErrorCode::kDegenerateVector, "row ", r, " has norm ", norms[r]);
    for (double &v : y.Row(r)) v /= norms[r];
  }
  return MakeOp(std::move(y), {x}, [x, norms, rows, cols](Node &n) {
    Tensor &g = x->Grad();
    for (int r = 0; r < rows; ++r) {
      double dot = 0.0;
      for (int c = 0; c < cols; ++c) dot += n.grad(r, c) * n.value(r, c);
      for (int c = 0; c < cols; ++c) g(r, c) += (n.grad(r, c) - n.value(r, c) * dot) / norms[r];
    }
  });
}

Var MeanRows(const Var &x) {
  RequireRank2(x->value, "MeanRows");
  const int rows = x->value.Rows(), cols = x->value.Cols();
  if (rows == 0) ThrowError(ErrorCode::kShapeMismatch, "MeanRows: no rows");
  Tensor y({1, cols});
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) y[c] += x->value(r, c);
  for (double &v : y.Data()) v /= rows;
  return MakeOp(std::move(y), {x}, [x, rows, cols](Node &n) {
    Tensor &g = x->Grad();
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) g(r, c) += n.grad[c] / rows;
  });
}

Var SumAll(const Var &x) {
  double s = 0.0;
  for (double v : x->value.Data()) s += v;
  return MakeOp(Tensor::Scalar(s), {x}, [x](Node &n) {
    Tensor &g = x->Grad();
    for (double &v : g.Data()) v += n.grad[0];
  });
}

Var MeanAll(const Var &x) {
  if (x->value.Size() == 0) ThrowError(ErrorCode::kShapeMismatch, "MeanAll: empty");
  return Scale(SumAll(x), 1.0 / static_cast<double>(x->value.Size()));
}

Var SumSquares(const Var &x) {
  return MakeOp(Tensor::Scalar(x->value.SumSquares()), {x}, [x](Node &n) {
    x->Grad().AddScaled(x->value, 2.0 * n.grad[0]);
  });
}

Var MaskRows(const Var &x, const std::vector<bool> &mask, const Var &emb) {
  RequireRank2(x->value, "MaskRows");
  const int rows = x->value.Rows(), cols = x->value.Cols();
  if (static_cast<int>(mask.size()) != rows)
    ThrowError(ErrorCode::kShapeMismatch, "MaskRows: mask length ", mask.size(), " vs ", rows);
  RequireVector(emb->value, cols, "MaskRows");
  Tensor y = x->value;
  for (int r = 0; r < rows; ++r)
    if (mask[r])
      for (int c = 0; c < cols; ++c) y(r, c) = emb->value[c];
  return MakeOp(std::move(y), {x, emb}, [x, emb, mask, rows, cols](Node &n) {
    Tensor *gx = x->requires_grad ? &x->Grad() : nullptr;
    Tensor *ge = emb->requires_grad ? &emb->Grad() : nullptr;
    for (int r = 0; r < rows; ++r)
      for (int c = 0; c < cols; ++c) {
        if (mask[r]) {
          if (ge) (*ge)[c] += n.grad(r, c);
        } else if (gx) {
          (*gx)(r, c) += n.grad(r, c);
        }
      }
  });
}

namespace {
thread_local std::uint64_t dropout_draws = 0;
}  // namespace

std::uint64_t DropoutDraws() { return dropout_draws; }

Var Dropout(const Var &x, double p, Rng *rng) {
  if (p < 0.0 || p >= 1.0) ThrowError(ErrorCode::kInvalidArgument, "dropout p=", p);
  if (p == 0.0 || rng == nullptr) return x;
  const double keep = 1.0 / (1.0 - p);
  Tensor mask(x->value.Shape());
  for (double &m : mask.Data()) m = rng->Bernoulli(p) ? 0.0 : keep;
  dropout_draws += mask.Size();
  Tensor y = x->value;
  for (std::size_t i = 0; i < y.Size(); ++i) y[i] *= mask[i];
  return MakeOp(std::move(y), {x}, [x, mask](Node &n) {
    Tensor &g = x->Grad();
    for (std::size_t i = 0; i < g.Size(); ++i) g[i] += n.grad[i] * mask[i];
  });
}

Var StraightThrough(const Tensor &hard, const Var &soft) {
  RequireSameShape(hard, soft->value, "StraightThrough");
  return MakeOp(hard, {soft}, [soft](Node &n) { soft->Grad().AddScaled(n.grad); });
}

Var ScaledDotAttention(const Var &q, const Var &k, const Var &v) {
  RequireRank2(q->value, "Attention");
  RequireRank2(k->value, "Attention");
  RequireRank2(v->value, "Attention");
  if (q->value.Cols() != k->value.Cols() || k->value.Rows() != v->value.Rows())
    ThrowError(ErrorCode::kShapeMismatch, "Attention: Q ", q->value.ShapeString(), " K ",
               k->value.ShapeString(), " V ", v->value.ShapeString());
  const double scale = 1.0 / std::sqrt(static_cast<double>(q->value.Cols()));
  return MatMul(Softmax(Scale(MatMul(q, Transpose(k)), scale)), v);
}

Var MultiHeadAttention(const Var &x, const AttentionParams &p, int heads) {
  const int d = p.wq->value.Cols();
  if (heads < 1 || d % heads != 0)
    ThrowError(ErrorCode::kShapeMismatch, "MultiHeadAttention: dim ", d, " not divisible by ",
               heads, " heads");
  const Var q = Linear(x, p.wq, p.bq);
  const Var k = Linear(x, p.wk, p.bk);
  const Var v = Linear(x, p.wv, p.bv);
  const int dk = d / heads;
  std::vector<Var> outs;
  outs.reserve(heads);
  for (int h = 0; h < heads; ++h)
    outs.push_back(ScaledDotAttention(SliceCols(q, h * dk, dk), SliceCols(k, h * dk, dk),
                                      SliceCols(v, h * dk, dk)));
  return Linear(heads == 1 ? outs[0] : ConcatCols(outs), p.wo, p.bo);
}

LstmState LstmCell(const Var &x, const LstmState &prev, const LstmParams &p) {
  const int hidden = p.u->value.Rows();
  if (p.w->value.Cols() != 4 * hidden || p.u->value.Cols() != 4 * hidden)
    ThrowError(ErrorCode::kShapeMismatch, "LstmCell: gate matrices need 4H columns");
  const Var pre = Add(Linear(x, p.w, p.b), MatMul(prev.h, p.u));
  const Var i = Sigmoid(SliceCols(pre, 0, hidden));
  const Var f = Sigmoid(SliceCols(pre, hidden, hidden));
  const Var o = Sigmoid(SliceCols(pre, 2 * hidden, hidden));
  const Var g = Tanh(SliceCols(pre, 3 * hidden, hidden));
  LstmState next;
  next.c = Add(Mul(f, prev.c), Mul(i, g));
  next.h = Mul(o, Tanh(next.c));
  return next;
}

Var LstmLayer(const Var &x, const LstmParams &p, bool reverse) {
  RequireRank2(x->value, "LstmLayer");
  const int frames = x->value.Rows();
  const int hidden = p.u->value.Rows();
  LstmState state{Constant(Tensor({1, hidden})), Constant(Tensor({1, hidden}))};
  std::vector<Var> outs(frames);
  for (int s = 0; s < frames; ++s) {
    const int t = reverse ? frames - 1 - s : s;
    state = LstmCell(SliceRows(x, t, 1), state, p);
    outs[t] = state.h;
  }
  return ConcatRows(outs);
}

Var BlstmLayer(const Var &x, const LstmParams &fwd, const LstmParams &bwd) {
  return ConcatCols({LstmLayer(x, fwd, false), LstmLayer(x, bwd, true)});
}

Var CrossEntropy(const Var &logits, const std::vector<int> &labels) {
  return FocalLoss(logits, labels, 0.0);
}

Var FocalLoss(const Var &logits, const std::vector<int> &labels, double gamma) {
  if (gamma < 0.0) ThrowError(ErrorCode::kInvalidArgument, "focal gamma ", gamma);
  CheckLabels(logits->value, labels, "FocalLoss");
  const int rows = logits->value.Rows();
  if (rows == 0) ThrowError(ErrorCode::kShapeMismatch, "FocalLoss: no rows");
  Tensor logp(logits->value.Shape());
  SoftmaxRows(logits->value, &logp, true);
  double total = 0.0;
  for (int r = 0; r < rows; ++r) {
    const double lp = logp(r, labels[r]);
    const double one_minus_p = -std::expm1(lp);
    total += -std::pow(one_minus_p, gamma) * lp;
  }
  return MakeOp(Tensor::Scalar(total / rows), {logits}, [logits, labels, gamma, logp, rows](Node &n) {
    Tensor &g = logits->Grad();
    const double scale = n.grad[0] / rows;
    for (int r = 0; r < rows; ++r) {
      const double lp = logp(r, labels[r]);
      const double p = std::exp(lp);
      const double q = -std::expm1(lp);
      // dL/dz_j = (delta_jy - s_j) * coef
      double coef = -std::pow(q, gamma);
      if (gamma > 0.0 && q > 0.0) coef += gamma * p * std::pow(q, gamma - 1.0) * lp;
      for (int c = 0; c < logp.Cols(); ++c) {
        const double delta = c == labels[r] ? 1.0 : 0.0;
        g(r, c) += scale * (delta - std::exp(logp(r, c))) * coef;
      }
    }
  });
}

Var DiversityLoss(const Var &probs, int groups) {
  RequireRank2(probs->value, "DiversityLoss");
  const int rows = probs->value.Rows(), cols = probs->value.Cols();
  if (groups < 1 || cols % groups != 0 || rows == 0)
    ThrowError(ErrorCode::kShapeMismatch, "DiversityLoss: ", probs->value.ShapeString(), " with ",
               groups, " groups");
  const int v = cols / groups;
  std::vector<double> mean(cols, 0.0);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) mean[c] += probs->value(r, c);
  for (double &m : mean) m /= rows;
  std::vector<double> perplexity(groups);
  double sum_ppl = 0.0;
  for (int g = 0; g < groups; ++g) {
    double h = 0.0;
    for (int j = 0; j < v; ++j) {
      const double m = mean[g * v + j];
      if (m > 0.0) h -= m * std::log(m);
    }
    perplexity[g] = std::exp(h);
    sum_ppl += perplexity[g];
  }
  const double total = static_cast<double>(cols);
  const double loss = (total - sum_ppl) / total;
  return MakeOp(Tensor::Scalar(loss), {probs}, [=](Node &n) {
    Tensor &gp = probs->Grad();
    for (int g = 0; g < groups; ++g)
      for (int j = 0; j < v; ++j) {
        const double m = std::max(mean[g * v + j], 1e-300);
        const double dm = perplexity[g] * (std::log(m) + 1.0) / total;
        for (int r = 0; r < rows; ++r) gp(r, g * v + j) += n.grad[0] * dm / rows;
      }
  });
}

}  // namespace asrlab::nnet

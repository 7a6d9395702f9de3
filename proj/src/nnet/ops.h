// nnet/ops.h

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

#ifndef ASRLAB_NNET_OPS_H_
#define ASRLAB_NNET_OPS_H_

#include <cstdint>
#include <vector>

#include "base/rand.h"
#include "nnet/autograd.h"

namespace asrlab::nnet {

// All ops work on rank-2 values [rows, cols] unless noted.  Bias vectors may
// be given as [m] or [1,m].  A null bias/gain Var means "absent".

Var MatMul(const Var &a, const Var &b);
Var Transpose(const Var &a);
/// x W + b.
Var Linear(const Var &x, const Var &w, const Var &b);

Var Add(const Var &a, const Var &b);
Var Sub(const Var &a, const Var &b);
Var Mul(const Var &a, const Var &b);
Var Scale(const Var &a, double s);
/// Adds a row vector to every row.
Var AddRowVector(const Var &x, const Var &v);

Var Relu(const Var &x);
/// Exact x * Phi(x).
Var Gelu(const Var &x);
Var Tanh(const Var &x);
Var Sigmoid(const Var &x);
Var Exp(const Var &x);
Var Log(const Var &x);

/// Per-row normalisation to mean 0, variance 1 with eps in the denominator,
/// followed by gain and bias (each optional).
Var LayerNorm(const Var &x, const Var &gain, const Var &bias, double eps = 1e-5);

/// x: [T, cin]; kernel: [k, cin/groups, cout] rank 3; output [T', cout]
/// with T' = floor((T + 2 pad - k) / stride) + 1.  Throws TooShort.
Var Conv1d(const Var &x, const Var &kernel, const Var &bias, int stride = 1,
           int padding = 0, int groups = 1);

Var Softmax(const Var &x);
Var LogSoftmax(const Var &x);

Var SliceRows(const Var &x, int start, int count);
Var SliceCols(const Var &x, int start, int count);
Var ConcatRows(const std::vector<Var> &parts);
Var ConcatCols(const std::vector<Var> &parts);
Var GatherRows(const Var &x, const std::vector<int> &rows);
/// out(i, j) = x(i, idx[i][j]); every idx[i] has the same length.
Var GatherCols(const Var &x, const std::vector<std::vector<int>> &idx);
Var ReverseRows(const Var &x);

/// Rows scaled to unit Euclidean norm.  Throws DegenerateVector when a row
/// norm is below 1e-12.
Var RowL2Normalize(const Var &x);

/// [1, cols] mean over rows.
Var MeanRows(const Var &x);
Var SumAll(const Var &x);
Var MeanAll(const Var &x);
Var SumSquares(const Var &x);

/// Rows with mask[r] set are replaced by `emb` ([d] or [1,d]).
Var MaskRows(const Var &x, const std::vector<bool> &mask, const Var &emb);

/// Inverted dropout; identity when p == 0 or rng is null.
Var Dropout(const Var &x, double p, Rng *rng);
/// Mask entries drawn by Dropout on this thread since start-up.
std::uint64_t DropoutDraws();

/// Forward value `hard`, gradient routed to `soft` unchanged.
Var StraightThrough(const Tensor &hard, const Var &soft);

/// softmax(Q K^T / sqrt(d_k)) V.
Var ScaledDotAttention(const Var &q, const Var &k, const Var &v);

struct AttentionParams {
  Var wq, bq, wk, bk, wv, bv, wo, bo;
};
/// Per-head attention on column blocks of the projected x, concatenated and
/// projected by wo.
Var MultiHeadAttention(const Var &x, const AttentionParams &p, int heads);

struct LstmParams {
  Var w;  // [din, 4H] gate order i, f, o, g
  Var u;  // [H, 4H]
  Var b;  // [4H]
};
struct LstmState {
  Var h, c;
};
LstmState LstmCell(const Var &x, const LstmState &prev, const LstmParams &p);
/// Runs the cell over the rows of x (reversed when `reverse`), zero initial
/// state; returns [T, H] in input order.
Var LstmLayer(const Var &x, const LstmParams &p, bool reverse = false);
/// Concatenation [T, 2H] of forward and backward passes.
Var BlstmLayer(const Var &x, const LstmParams &fwd, const LstmParams &bwd);

/// Mean over rows of -log softmax(logits)[label].
Var CrossEntropy(const Var &logits, const std::vector<int> &labels);
/// Mean over rows of -(1-p)^gamma log p with p = softmax(logits)[label].
Var FocalLoss(const Var &logits, const std::vector<int> &labels, double gamma);
/// probs: [N, G*V] rows of per-group distributions.  Returns
/// (G V - sum_g exp(H(mean_g))) / (G V).
Var DiversityLoss(const Var &probs, int groups);

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_OPS_H_

// lm/ngram-counts.cc

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

#include "lm/ngram-counts.h"

#include "base/asr-error.h"

namespace asrlab {

bool NGramCounts::Empty() const {
  for (const auto &t : tables)
    if (!t.empty()) return false;
  return true;
}

void NGramCounts::Add(const NGramCounts &other) {
  if (other.order != order)
    ThrowError(ErrorCode::kInvalidArgument, "count order mismatch ", order, " vs ",
               other.order);
  for (int k = 0; k < order; ++k)
    for (const auto &[ng, c] : other.tables[k]) tables[k][ng] += c;
}

long NGramCounts::Count(const NGram &ngram) const {
  if (ngram.empty() || static_cast<int>(ngram.size()) > order) return 0;
  const auto &t = tables[ngram.size() - 1];
  auto it = t.find(ngram);
  return it == t.end() ? 0 : it->second;
}

NGramCounts CountNGrams(const TextCorpus &corpus, int order) {
  if (order < 1) ThrowError(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
  NGramCounts counts;
  counts.order = order;
  counts.tables.resize(order);
  for (const auto &sent : corpus) {
    std::vector<std::string> padded;
    padded.reserve(sent.size() + 2);
    padded.push_back(kBosToken);
    padded.insert(padded.end(), sent.begin(), sent.end());
    padded.push_back(kEosToken);
    for (std::size_t i = 1; i < padded.size(); ++i)
      for (int k = 1; k <= order && static_cast<int>(i) + 1 >= k; ++k)
        ++counts.tables[k - 1][NGram(padded.begin() + (i + 1 - k), padded.begin() + i + 1)];
  }
  return counts;
}

}  // namespace asrlab

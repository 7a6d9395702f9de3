// lm/ngram-counts.h

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

#ifndef ASRLAB_LM_NGRAM_COUNTS_H_
#define ASRLAB_LM_NGRAM_COUNTS_H_

#include <map>
#include <string>
#include <vector>

#include "lm/vocabulary.h"

namespace asrlab {

using NGram = std::vector<std::string>;

/// Raw n-gram counts for orders 1..order.  Each sentence is padded with one
/// <s> and one </s>; every n-gram ending on a predicted token (a word or
/// </s>) is counted, so unigram counts never include <s>.
struct NGramCounts {
  int order = 0;
  std::vector<std::map<NGram, long>> tables;  // tables[k-1] holds k-grams

  bool Empty() const;
  /// Merges counts of the same order (per-document counting).
  void Add(const NGramCounts &other);
  long Count(const NGram &ngram) const;
};

NGramCounts CountNGrams(const TextCorpus &corpus, int order);

}  // namespace asrlab

#endif  // ASRLAB_LM_NGRAM_COUNTS_H_

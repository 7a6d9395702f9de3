// lm/ngram-model.h

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

#ifndef ASRLAB_LM_NGRAM_MODEL_H_
#define ASRLAB_LM_NGRAM_MODEL_H_

#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "lm/ngram-counts.h"
#include "lm/vocabulary.h"

namespace asrlab {

/// Conditional word probabilities p(w | h) over the predictable vocabulary
/// (words, </s>, <unk>).  All log probabilities are base 10.
class LanguageModel {
 public:
  virtual ~LanguageModel() = default;
  virtual int Order() const = 0;
  virtual const Vocabulary &Vocab() const = 0;
  /// log10 p(word | history); only the last Order()-1 history ids are used.
  /// Ids outside the vocabulary are treated as <unk>.
  virtual double LogProb(int word, std::span<const int> history) const = 0;

  /// String convenience wrapper; OOV words map to <unk>.
  double LogProb(const std::string &word, const std::vector<std::string> &history) const;
};

/// Backoff n-gram table in the usual ARPA layout.  For an interpolated
/// Kneser-Ney model the stored probability of a seen n-gram is the full
/// interpolated value and the backoff weight of a history is its
/// interpolation weight, so queries are exact.
class NGramModel : public LanguageModel {
 public:
  struct Entry {
    double log_prob = 0.0;
    double log_bow = 0.0;
  };
  using Key = std::vector<int>;
  using Table = std::map<Key, Entry>;

  NGramModel() = default;
  NGramModel(int order, Vocabulary vocab);

  /// Order-1 model giving every predictable token probability 1/|V|.
  static NGramModel Uniform(const Vocabulary &vocab);

  int Order() const override { return order_; }
  const Vocabulary &Vocab() const override { return vocab_; }
  using LanguageModel::LogProb;
  double LogProb(int word, std::span<const int> history) const override;

  const Table &GetTable(int n) const { return tables_.at(n - 1); }
  Table &MutableTable(int n) { return tables_.at(n - 1); }
  /// The empty history plus every stored n-gram of order < Order().
  std::vector<Key> Histories() const;
  /// Predictable ids: every id except <s>.
  std::vector<int> PredictableIds() const;

 private:
  int order_ = 0;
  Vocabulary vocab_;
  std::vector<Table> tables_;
};

inline constexpr double kDefaultKnDiscount = 0.75;

struct KneserNeyOptions {
  /// One discount per order (lowest first); a single value applies to all.
  std::vector<double> discounts{kDefaultKnDiscount};
};

/// Interpolated Kneser-Ney with a fixed discount per order.  The highest
/// order uses raw counts, lower orders continuation counts N1+(. h w) except
/// for n-grams starting with <s>, which keep raw counts.  The unigram level
/// interpolates with a uniform distribution; <unk> additionally receives the
/// fraction of singleton word tokens as explicit mass.  `vocab` defaults to
/// the words seen in the counts; a larger shared vocabulary may be given.
NGramModel EstimateKneserNey(const NGramCounts &counts, const KneserNeyOptions &opts = {},
                             const Vocabulary *vocab = nullptr);

void WriteArpa(std::ostream &os, const NGramModel &model);
NGramModel ReadArpa(std::istream &is);
void WriteArpaFile(const std::string &path, const NGramModel &model);
NGramModel ReadArpaFile(const std::string &path);

}  // namespace asrlab

#endif  // ASRLAB_LM_NGRAM_MODEL_H_

// lm/vocabulary.h

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

#ifndef ASRLAB_LM_VOCABULARY_H_
#define ASRLAB_LM_VOCABULARY_H_

#include <string>
#include <unordered_map>
#include <vector>

namespace asrlab {

inline constexpr const char *kBosToken = "<s>";
inline constexpr const char *kEosToken = "</s>";
inline constexpr const char *kUnkToken = "<unk>";

/// Word <-> id map.  Ids 0, 1, 2 are always <s>, </s>, <unk>; ordinary words
/// follow in sorted order.
class Vocabulary {
 public:
  static constexpr int kBos = 0, kEos = 1, kUnk = 2;

  Vocabulary();
  explicit Vocabulary(const std::vector<std::string> &words);
  static Vocabulary FromCorpus(const std::vector<std::vector<std::string>> &corpus);

  int Size() const { return static_cast<int>(words_.size()); }
  /// Number of tokens that can be predicted (everything except <s>).
  int NumPredictable() const { return Size() - 1; }
  const std::string &Word(int id) const { return words_.at(id); }
  /// kUnk for out-of-vocabulary words.
  int Id(const std::string &word) const;
  bool Contains(const std::string &word) const { return ids_.count(word) > 0; }
  const std::vector<std::string> &Words() const { return words_; }

  bool operator==(const Vocabulary &other) const { return words_ == other.words_; }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

using TextCorpus = std::vector<std::vector<std::string>>;

/// One sentence per line, whitespace tokenized; blank lines are skipped.
TextCorpus ReadTextCorpus(const std::string &path);
TextCorpus ParseTextCorpus(const std::string &text);

}  // namespace asrlab

#endif  // ASRLAB_LM_VOCABULARY_H_

// decoder/lexicon.h

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

#ifndef ASRLAB_DECODER_LEXICON_H_
#define ASRLAB_DECODER_LEXICON_H_

#include <map>
#include <string>
#include <vector>

#include "hmm/acoustic-model.h"

namespace asrlab {

using Pronunciation = std::vector<std::string>;

/// Word -> one or more phone sequences.  Words are kept sorted, so word ids
/// are stable for a given set of entries.
class Lexicon {
 public:
  /// Adds an alternative; duplicate pronunciations are ignored.  Throws on an
  /// empty pronunciation.
  void Add(const std::string &word, const Pronunciation &pron);
  /// Adds every entry of `other` (e.g. supplemental domain terms).
  void Merge(const Lexicon &other);

  bool Contains(const std::string &word) const { return entries_.count(word) > 0; }
  const std::vector<Pronunciation> &Prons(const std::string &word) const;
  std::vector<std::string> Words() const;
  int NumWords() const { return static_cast<int>(entries_.size()); }
  /// Index in Words(), -1 if absent.
  int WordId(const std::string &word) const;

  /// Throws unless every phone is in the inventory.
  void Validate(const PhoneSet &phones) const;

 private:
  std::map<std::string, std::vector<Pronunciation>> entries_;
};

/// "word<TAB>ph1 ph2 ..." per line (any whitespace after the word is
/// accepted); repeated words add alternatives.
Lexicon ParseLexicon(const std::string &text);
Lexicon ReadLexicon(const std::string &path);
void WriteLexicon(const std::string &path, const Lexicon &lexicon);

}  // namespace asrlab

#endif  // ASRLAB_DECODER_LEXICON_H_

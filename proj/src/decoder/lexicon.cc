// decoder/lexicon.cc

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

#include "decoder/lexicon.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "base/asr-error.h"

namespace asrlab {

void Lexicon::Add(const std::string &word, const Pronunciation &pron) {
  if (word.empty()) ThrowError(ErrorCode::kInvalidArgument, "empty lexicon word");
  if (pron.empty()) ThrowError(ErrorCode::kInvalidArgument, "empty pronunciation for ", word);
  auto &prons = entries_[word];
  if (std::find(prons.begin(), prons.end(), pron) == prons.end()) prons.push_back(pron);
}

void Lexicon::Merge(const Lexicon &other) {
  for (const auto &[w, prons] : other.entries_)
    for (const auto &p : prons) Add(w, p);
}

const std::vector<Pronunciation> &Lexicon::Prons(const std::string &word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) ThrowError(ErrorCode::kMissingWord, "word not in lexicon: ", word);
  return it->second;
}

std::vector<std::string> Lexicon::Words() const {
  std::vector<std::string> out;
  for (const auto &[w, p] : entries_) out.push_back(w);
  return out;
}

int Lexicon::WordId(const std::string &word) const {
  auto it = entries_.find(word);
  return it == entries_.end() ? -1 : static_cast<int>(std::distance(entries_.begin(), it));
}

void Lexicon::Validate(const PhoneSet &phones) const {
  for (const auto &[w, prons] : entries_)
    for (const auto &p : prons)
      for (const auto &ph : p)
        if (phones.Index(ph) < 0)
          ThrowError(ErrorCode::kInvalidArgument, "word ", w, " uses unknown phone ", ph);
}

Lexicon ParseLexicon(const std::string &text) {
  Lexicon lex;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string word, ph;
    if (!(ls >> word)) continue;
    Pronunciation pron;
    while (ls >> ph) pron.push_back(ph);
    if (pron.empty())
      ThrowError(ErrorCode::kFormatError, "lexicon line ", lineno, ": no phones for ", word);
    lex.Add(word, pron);
  }
  return lex;
}

Lexicon ReadLexicon(const std::string &path) {
  std::ifstream in(path);
  if (!in) ThrowError(ErrorCode::kIoError, "cannot open lexicon ", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseLexicon(ss.str());
}

void WriteLexicon(const std::string &path, const Lexicon &lexicon) {
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  for (const auto &w : lexicon.Words())
    for (const auto &p : lexicon.Prons(w)) {
      os << w << '\t';
      for (std::size_t i = 0; i < p.size(); ++i) os << (i ? " " : "") << p[i];
      os << '\n';
    }
}

}  // namespace asrlab

// lm/vocabulary.cc

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

#include "lm/vocabulary.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "base/asr-error.h"

namespace asrlab {

Vocabulary::Vocabulary() : Vocabulary(std::vector<std::string>{}) {}

Vocabulary::Vocabulary(const std::vector<std::string> &words) {
  words_ = {kBosToken, kEosToken, kUnkToken};
  std::set<std::string> sorted(words.begin(), words.end());
  for (const char *special : {kBosToken, kEosToken, kUnkToken}) sorted.erase(special);
  words_.insert(words_.end(), sorted.begin(), sorted.end());
  for (int i = 0; i < Size(); ++i) ids_[words_[i]] = i;
}

Vocabulary Vocabulary::FromCorpus(const std::vector<std::vector<std::string>> &corpus) {
  std::vector<std::string> words;
  for (const auto &sent : corpus) words.insert(words.end(), sent.begin(), sent.end());
  return Vocabulary(words);
}

int Vocabulary::Id(const std::string &word) const {
  auto it = ids_.find(word);
  return it == ids_.end() ? kUnk : it->second;
}

TextCorpus ParseTextCorpus(const std::string &text) {
  TextCorpus corpus;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::vector<std::string> sent;
    std::string w;
    while (ls >> w) sent.push_back(w);
    if (!sent.empty()) corpus.push_back(std::move(sent));
  }
  return corpus;
}

TextCorpus ReadTextCorpus(const std::string &path) {
  std::ifstream in(path);
  if (!in) ThrowError(ErrorCode::kIoError, "cannot open text corpus ", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseTextCorpus(ss.str());
}

}  // namespace asrlab

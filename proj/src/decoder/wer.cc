// decoder/wer.cc

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

#include "decoder/wer.h"

#include <fstream>
#include <sstream>

#include "base/asr-error.h"

namespace asrlab {

namespace {

// Lexicographic cost (edits, insertions); adding costs is componentwise.
struct EditCost {
  long edits = 0, ins = 0;
  bool operator<(const EditCost &o) const {
    return edits != o.edits ? edits < o.edits : ins < o.ins;
  }
};

}  // namespace

WerBreakdown ComputeWer(const std::vector<std::string> &ref,
                        const std::vector<std::string> &hyp) {
  if (ref.empty()) ThrowError(ErrorCode::kEmptyReference, "empty reference");
  const std::size_t N = ref.size(), M = hyp.size();
  std::vector<std::vector<EditCost>> d(N + 1, std::vector<EditCost>(M + 1));
  for (std::size_t i = 1; i <= N; ++i) d[i][0] = {static_cast<long>(i), 0};
  for (std::size_t j = 1; j <= M; ++j) d[0][j] = {static_cast<long>(j), static_cast<long>(j)};
  for (std::size_t i = 1; i <= N; ++i)
    for (std::size_t j = 1; j <= M; ++j) {
      EditCost diag = d[i - 1][j - 1];
      diag.edits += ref[i - 1] != hyp[j - 1];
      EditCost ins = d[i][j - 1];
      ++ins.edits;
      ++ins.ins;
      EditCost del = d[i - 1][j];
      ++del.edits;
      EditCost best = diag;
      if (ins < best) best = ins;
      if (del < best) best = del;
      d[i][j] = best;
    }

  WerBreakdown w;
  w.reference_words = N;
  std::size_t i = N, j = M;
  while (i > 0 || j > 0) {
    if (i > 0 && j > 0) {
      EditCost diag = d[i - 1][j - 1];
      diag.edits += ref[i - 1] != hyp[j - 1];
      if (diag.edits == d[i][j].edits && diag.ins == d[i][j].ins) {
        if (ref[i - 1] != hyp[j - 1]) ++w.substitutions;
        --i;
        --j;
        continue;
      }
    }
    if (j > 0 && d[i][j - 1].edits + 1 == d[i][j].edits && d[i][j - 1].ins + 1 == d[i][j].ins) {
      ++w.insertions;
      --j;
    } else {
      ++w.deletions;
      --i;
    }
  }
  w.wer = static_cast<double>(w.Errors()) / N;
  return w;
}

WerBreakdown ScoreCorpus(const Transcripts &refs, const Transcripts &hyps) {
  if (refs.size() != hyps.size())
    ThrowError(ErrorCode::kIdMismatch, refs.size(), " references but ", hyps.size(),
               " hypotheses");
  WerBreakdown total;
  for (const auto &[id, ref] : refs) {
    auto it = hyps.find(id);
    if (it == hyps.end()) ThrowError(ErrorCode::kIdMismatch, "no hypothesis for ", id);
    const WerBreakdown u = ComputeWer(ref, it->second);
    total.substitutions += u.substitutions;
    total.insertions += u.insertions;
    total.deletions += u.deletions;
    total.reference_words += u.reference_words;
  }
  if (total.reference_words == 0) ThrowError(ErrorCode::kEmptyReference, "no reference words");
  total.wer = static_cast<double>(total.Errors()) / total.reference_words;
  return total;
}

Transcripts ParseTranscripts(const std::string &text) {
  Transcripts out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string id, w;
    if (!(ls >> id)) continue;
    std::vector<std::string> words;
    while (ls >> w) words.push_back(w);
    if (!out.emplace(id, std::move(words)).second)
      ThrowError(ErrorCode::kFormatError, "duplicate utterance id ", id);
  }
  return out;
}

Transcripts ReadTranscripts(const std::string &path) {
  std::ifstream in(path);
  if (!in) ThrowError(ErrorCode::kIoError, "cannot open ", path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ParseTranscripts(ss.str());
}

void WriteTranscripts(const std::string &path, const Transcripts &trans) {
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  for (const auto &[id, words] : trans) {
    os << id;
    for (const auto &w : words) os << ' ' << w;
    os << '\n';
  }
}

}  // namespace asrlab

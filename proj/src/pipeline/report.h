// pipeline/report.h

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

#ifndef ASRLAB_PIPELINE_REPORT_H_
#define ASRLAB_PIPELINE_REPORT_H_

#include <string>
#include <vector>

#include "decoder/wer.h"

namespace asrlab {

struct WerRow {
  std::string system;
  std::string split;
  WerBreakdown wer;
};

/// Rows are kept sorted by (system order of first appearance, split order
/// dev, test, train, pretrain, then others alphabetically).
class WerReport {
 public:
  /// Replaces an existing (system, split) row.
  void Add(const std::string &system, const std::string &split, const WerBreakdown &wer);
  const std::vector<WerRow> &Rows() const { return rows_; }
  std::vector<std::string> Systems() const;
  std::vector<std::string> Splits() const;
  const WerRow *Find(const std::string &system, const std::string &split) const;
  bool operator==(const WerReport &other) const;

 private:
  std::vector<WerRow> rows_;
  std::vector<std::string> systems_;
};

/// One line per system, one WER [%] column per split (one decimal); a
/// missing cell prints "-".
std::string FormatWerTable(const WerReport &report);

/// system,split,wer,substitutions,insertions,deletions,reference_words
/// with shortest round-trip doubles.
std::string FormatWerCsv(const WerReport &report);
WerReport ParseWerCsv(const std::string &text);

}  // namespace asrlab

#endif  // ASRLAB_PIPELINE_REPORT_H_

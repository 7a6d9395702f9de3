// pipeline/report.cc

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

#include "pipeline/report.h"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "base/asr-error.h"
#include "base/kv-config.h"

namespace asrlab {

namespace {

int SplitRank(const std::string &split) {
  static const char *kOrder[] = {"dev", "test", "train", "pretrain"};
  for (int i = 0; i < 4; ++i)
    if (split == kOrder[i]) return i;
  return 4;
}

bool SplitLess(const std::string &a, const std::string &b) {
  const int ra = SplitRank(a), rb = SplitRank(b);
  return ra != rb ? ra < rb : a < b;
}

}  // namespace

void WerReport::Add(const std::string &system, const std::string &split, const WerBreakdown &wer) {
  if (std::find(systems_.begin(), systems_.end(), system) == systems_.end()) systems_.push_back(system);
  for (auto &r : rows_)
    if (r.system == system && r.split == split) {
      r.wer = wer;
      return;
    }
  rows_.push_back({system, split, wer});
  auto sys_rank = [&](const std::string &s) {
    return std::find(systems_.begin(), systems_.end(), s) - systems_.begin();
  };
  std::stable_sort(rows_.begin(), rows_.end(), [&](const WerRow &a, const WerRow &b) {
    if (a.system != b.system) return sys_rank(a.system) < sys_rank(b.system);
    return SplitLess(a.split, b.split);
  });
}

std::vector<std::string> WerReport::Systems() const { return systems_; }

std::vector<std::string> WerReport::Splits() const {
  std::vector<std::string> out;
  for (const auto &r : rows_)
    if (std::find(out.begin(), out.end(), r.split) == out.end()) out.push_back(r.split);
  std::sort(out.begin(), out.end(), SplitLess);
  return out;
}

const WerRow *WerReport::Find(const std::string &system, const std::string &split) const {
  for (const auto &r : rows_)
    if (r.system == system && r.split == split) return &r;
  return nullptr;
}

bool WerReport::operator==(const WerReport &other) const {
  if (rows_.size() != other.rows_.size() || systems_ != other.systems_) return false;
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const WerRow &a = rows_[i], &b = other.rows_[i];
    if (a.system != b.system || a.split != b.split || a.wer.wer != b.wer.wer ||
        a.wer.substitutions != b.wer.substitutions || a.wer.insertions != b.wer.insertions ||
        a.wer.deletions != b.wer.deletions || a.wer.reference_words != b.wer.reference_words)
      return false;
  }
  return true;
}

std::string FormatWerTable(const WerReport &report) {
  const auto systems = report.Systems();
  const auto splits = report.Splits();
  std::size_t first = std::string("system").size();
  for (const auto &s : systems) first = std::max(first, s.size());
  std::vector<std::size_t> widths;
  for (const auto &sp : splits) widths.push_back(std::max<std::size_t>(sp.size(), 5));
  std::ostringstream os;
  os << std::left << std::setw(first) << "system";
  for (std::size_t j = 0; j < splits.size(); ++j) os << "  " << std::right << std::setw(widths[j]) << splits[j];
  os << "\n";
  for (const auto &s : systems) {
    os << std::left << std::setw(first) << s;
    for (std::size_t j = 0; j < splits.size(); ++j) {
      const WerRow *r = report.Find(s, splits[j]);
      std::ostringstream cell;
      if (r) {
        cell << std::fixed << std::setprecision(1) << 100.0 * r->wer.wer;
      } else {
        cell << "-";
      }
      os << "  " << std::right << std::setw(widths[j]) << cell.str();
    }
    os << "\n";
  }
  return os.str();
}

std::string FormatWerCsv(const WerReport &report) {
  std::ostringstream os;
  os << "system,split,wer,substitutions,insertions,deletions,reference_words\n";
  for (const auto &r : report.Rows())
    os << r.system << ',' << r.split << ',' << FormatDouble(r.wer.wer) << ',' << r.wer.substitutions
       << ',' << r.wer.insertions << ',' << r.wer.deletions << ',' << r.wer.reference_words << "\n";
  return os.str();
}

WerReport ParseWerCsv(const std::string &text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line) || line.rfind("system,split,wer", 0) != 0)
    ThrowError(ErrorCode::kFormatError, "WER CSV lacks its header");
  WerReport report;
  int lineno = 1;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
    if (f.size() != 7) ThrowError(ErrorCode::kFormatError, "WER CSV line ", lineno, ": 7 fields expected");
    KvConfig kv;
    kv.Set("wer", f[2]);
    kv.Set("s", f[3]);
    kv.Set("i", f[4]);
    kv.Set("d", f[5]);
    kv.Set("n", f[6]);
    WerBreakdown w;
    w.wer = kv.GetDouble("wer");
    w.substitutions = kv.GetInt("s");
    w.insertions = kv.GetInt("i");
    w.deletions = kv.GetInt("d");
    w.reference_words = kv.GetInt("n");
    report.Add(f[0], f[1], w);
  }
  return report;
}

}  // namespace asrlab

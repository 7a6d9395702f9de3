// lm/ngram-model.cc

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

#include "lm/ngram-model.h"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "base/asr-error.h"

namespace asrlab {

namespace {

constexpr double kArpaLogZero = -99.0;

}  // namespace

double LanguageModel::LogProb(const std::string &word,
                              const std::vector<std::string> &history) const {
  std::vector<int> ids;
  ids.reserve(history.size());
  for (const auto &h : history) ids.push_back(Vocab().Id(h));
  return LogProb(Vocab().Id(word), ids);
}

NGramModel::NGramModel(int order, Vocabulary vocab)
    : order_(order), vocab_(std::move(vocab)), tables_(order) {
  if (order < 1) ThrowError(ErrorCode::kInvalidArgument, "n-gram order must be >= 1");
}

NGramModel NGramModel::Uniform(const Vocabulary &vocab) {
  NGramModel m(1, vocab);
  const double lp = -std::log10(static_cast<double>(vocab.NumPredictable()));
  m.tables_[0][{Vocabulary::kBos}] = {kArpaLogZero, 0.0};
  for (int w : m.PredictableIds()) m.tables_[0][{w}] = {lp, 0.0};
  return m;
}

std::vector<int> NGramModel::PredictableIds() const {
  std::vector<int> ids;
  for (int i = 0; i < vocab_.Size(); ++i)
    if (i != Vocabulary::kBos) ids.push_back(i);
  return ids;
}

std::vector<NGramModel::Key> NGramModel::Histories() const {
  std::vector<Key> out{Key{}};
  for (int n = 1; n < order_; ++n)
    for (const auto &[key, e] : tables_[n - 1]) out.push_back(key);
  return out;
}

double NGramModel::LogProb(int word, std::span<const int> history) const {
  if (word < 0 || word >= vocab_.Size()) word = Vocabulary::kUnk;
  if (word == Vocabulary::kBos)
    ThrowError(ErrorCode::kInvalidArgument, "<s> is not a predictable token");
  const std::size_t len = std::min<std::size_t>(history.size(), order_ - 1);
  Key h;
  h.reserve(len + 1);
  for (std::size_t i = history.size() - len; i < history.size(); ++i) {
    const int id = history[i];
    h.push_back(id < 0 || id >= vocab_.Size() ? Vocabulary::kUnk : id);
  }
  double bow = 0.0;
  for (std::size_t start = 0; start <= len; ++start) {
    Key key(h.begin() + start, h.end());
    key.push_back(word);
    const Table &t = tables_[key.size() - 1];
    auto it = t.find(key);
    if (it != t.end()) return bow + it->second.log_prob;
    if (start < len) {
      key.pop_back();
      const Table &ht = tables_[key.size() - 1];
      auto hit = ht.find(key);
      if (hit != ht.end()) bow += hit->second.log_bow;
    }
  }
  ThrowError(ErrorCode::kFormatError, "no unigram entry for ", vocab_.Word(word));
}

NGramModel EstimateKneserNey(const NGramCounts &counts, const KneserNeyOptions &opts,
                             const Vocabulary *vocab_in) {
  if (counts.order < 1 || counts.Empty())
    ThrowError(ErrorCode::kEmptyCounts, "no n-gram counts");
  const int order = counts.order;
  std::vector<double> disc = opts.discounts;
  if (disc.size() == 1) disc.assign(order, disc[0]);
  if (static_cast<int>(disc.size()) != order)
    ThrowError(ErrorCode::kInvalidArgument, "need one discount per order");
  for (double d : disc)
    if (!(d > 0.0 && d < 1.0)) ThrowError(ErrorCode::kInvalidArgument, "discount must be in (0,1)");

  Vocabulary vocab;
  if (vocab_in) {
    vocab = *vocab_in;
  } else {
    std::vector<std::string> words;
    for (const auto &[ng, c] : counts.tables[0]) words.push_back(ng[0]);
    vocab = Vocabulary(words);
  }

  // raw counts keyed by id; out-of-vocabulary words fold into <unk>
  using IdTable = std::map<NGramModel::Key, double>;
  std::vector<IdTable> raw(order);
  for (int k = 0; k < order; ++k)
    for (const auto &[ng, c] : counts.tables[k]) {
      NGramModel::Key key;
      for (const auto &w : ng) key.push_back(vocab.Id(w));
      raw[k][key] += c;
    }

  // effective counts: continuation counts below the top order
  std::vector<IdTable> eff(order);
  eff[order - 1] = raw[order - 1];
  for (int k = 0; k + 1 < order; ++k) {
    IdTable cont;
    for (const auto &[key, c] : raw[k + 1])
      if (key[1] != Vocabulary::kBos) cont[NGramModel::Key(key.begin() + 1, key.end())] += 1.0;
    for (const auto &[key, c] : raw[k])
      eff[k][key] = key[0] == Vocabulary::kBos ? c : cont[key];
  }

  NGramModel model(order, vocab);
  const std::vector<int> predictable = model.PredictableIds();

  // unigrams
  {
    double total = 0.0, types = 0.0;
    for (const auto &[key, c] : eff[0])
      if (c > 0) {
        total += c;
        types += 1.0;
      }
    const double d = disc[0];
    const double lambda = d * types / total;
    double word_tokens = 0.0, singletons = 0.0;
    for (const auto &[key, c] : raw[0]) {
      if (key[0] == Vocabulary::kEos || key[0] == Vocabulary::kUnk) continue;
      word_tokens += c;
      if (c == 1.0) singletons += 1.0;
    }
    const double unk_mass = word_tokens > 0 ? singletons / word_tokens : 0.0;
    const double uniform = 1.0 / predictable.size();
    auto &t = model.MutableTable(1);
    t[{Vocabulary::kBos}] = {kArpaLogZero, 0.0};
    for (int w : predictable) {
      auto it = eff[0].find({w});
      const double c = it == eff[0].end() ? 0.0 : it->second;
      double p = std::max(c - d, 0.0) / total + lambda * uniform;
      p *= 1.0 - unk_mass;
      if (w == Vocabulary::kUnk) p += unk_mass;
      t[{w}] = {std::log10(p), 0.0};
    }
  }

  for (int k = 2; k <= order; ++k) {
    const double d = disc[k - 1];
    // history totals
    std::map<NGramModel::Key, std::pair<double, double>> hist;  // c(h), N1+(h .)
    for (const auto &[key, c] : eff[k - 1]) {
      auto &hs = hist[NGramModel::Key(key.begin(), key.end() - 1)];
      hs.first += c;
      if (c > 0) hs.second += 1.0;
    }
    auto &lower_table = model.MutableTable(k - 1);
    std::vector<std::pair<NGramModel::Key, double>> probs;
    for (const auto &[key, c] : eff[k - 1]) {
      NGramModel::Key h(key.begin(), key.end() - 1);
      const auto &[ch, n1] = hist[h];
      const double lambda = d * n1 / ch;
      const double lower =
          std::pow(10.0, model.LogProb(key.back(), std::span<const int>(h).subspan(1)));
      probs.emplace_back(key, std::max(c - d, 0.0) / ch + lambda * lower);
    }
    for (const auto &[h, hs] : hist) {
      auto it = lower_table.find(h);
      if (it == lower_table.end())
        ThrowError(ErrorCode::kFormatError, "history missing from lower-order counts");
      it->second.log_bow = std::log10(d * hs.second / hs.first);
    }
    auto &t = model.MutableTable(k);
    for (const auto &[key, p] : probs) t[key] = {std::log10(p), 0.0};
  }
  return model;
}

void WriteArpa(std::ostream &os, const NGramModel &model) {
  const Vocabulary &v = model.Vocab();
  os << "\n\\data\\\n";
  for (int n = 1; n <= model.Order(); ++n)
    os << "ngram " << n << "=" << model.GetTable(n).size() << "\n";
  os << std::setprecision(std::numeric_limits<double>::max_digits10);
  for (int n = 1; n <= model.Order(); ++n) {
    os << "\n\\" << n << "-grams:\n";
    for (const auto &[key, e] : model.GetTable(n)) {
      os << e.log_prob << '\t';
      for (std::size_t i = 0; i < key.size(); ++i) os << (i ? " " : "") << v.Word(key[i]);
      if (n < model.Order() && e.log_bow != 0.0) os << '\t' << e.log_bow;
      os << '\n';
    }
  }
  os << "\n\\end\\\n";
}

NGramModel ReadArpa(std::istream &is) {
  std::string line;
  std::vector<std::size_t> declared;
  while (std::getline(is, line) && line != "\\data\\") {
  }
  if (!is) ThrowError(ErrorCode::kFormatError, "ARPA: missing \\data\\ header");
  while (std::getline(is, line) && line.rfind("ngram ", 0) == 0) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) ThrowError(ErrorCode::kFormatError, "ARPA: bad count line");
    declared.push_back(std::stoul(line.substr(eq + 1)));
  }
  if (declared.empty()) ThrowError(ErrorCode::kFormatError, "ARPA: no n-gram counts");
  const int order = static_cast<int>(declared.size());

  struct Raw {
    std::vector<std::string> words;
    double prob, bow;
  };
  std::vector<std::vector<Raw>> sections(order);
  int current = 0;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line == "\\end\\") break;
    if (line[0] == '\\') {
      current = std::stoi(line.substr(1));
      if (current < 1 || current > order)
        ThrowError(ErrorCode::kFormatError, "ARPA: bad section ", line);
      continue;
    }
    if (current == 0) ThrowError(ErrorCode::kFormatError, "ARPA: entry outside a section");
    std::istringstream ls(line);
    Raw r{{}, 0.0, 0.0};
    ls >> r.prob;
    for (int i = 0; i < current; ++i) {
      std::string w;
      if (!(ls >> w)) ThrowError(ErrorCode::kFormatError, "ARPA: short entry: ", line);
      r.words.push_back(w);
    }
    if (!(ls >> r.bow)) r.bow = 0.0;
    sections[current - 1].push_back(std::move(r));
  }
  for (int n = 0; n < order; ++n)
    if (sections[n].size() != declared[n])
      ThrowError(ErrorCode::kFormatError, "ARPA: ", n + 1, "-gram count mismatch");

  std::vector<std::string> words;
  for (const auto &r : sections[0]) words.push_back(r.words[0]);
  for (const char *tok : {kBosToken, kEosToken, kUnkToken})
    if (std::find(words.begin(), words.end(), tok) == words.end())
      ThrowError(ErrorCode::kFormatError, "ARPA: missing unigram ", tok);
  NGramModel model(order, Vocabulary(words));
  for (int n = 1; n <= order; ++n)
    for (const auto &r : sections[n - 1]) {
      NGramModel::Key key;
      for (const auto &w : r.words) {
        if (!model.Vocab().Contains(w))
          ThrowError(ErrorCode::kFormatError, "ARPA: word not in unigrams: ", w);
        key.push_back(model.Vocab().Id(w));
      }
      model.MutableTable(n)[key] = {r.prob, r.bow};
    }
  return model;
}

void WriteArpaFile(const std::string &path, const NGramModel &model) {
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  WriteArpa(os, model);
}

NGramModel ReadArpaFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open ", path);
  return ReadArpa(is);
}

}  // namespace asrlab

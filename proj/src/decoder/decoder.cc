// decoder/decoder.cc

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

#include "decoder/decoder.h"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numbers>

#include "base/asr-error.h"
#include "base/math-utils.h"

namespace asrlab {

void DecodeConfig::Validate() const {
  if (!(am_scale > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "am_scale must be > 0");
  if (!(lm_scale > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "lm_scale must be > 0");
  if (!(beam_logwidth >= 0.0)) ThrowError(ErrorCode::kInvalidArgument, "beam must be >= 0");
  if (max_active < 0) ThrowError(ErrorCode::kInvalidArgument, "max_active must be >= 0");
}

Decoder::Decoder(const AcousticModel &model, const Lexicon &lexicon, const LanguageModel &lm,
                 DecodeConfig cfg)
    : model_(model), lm_(lm), cfg_(cfg) {
  cfg_.Validate();
  lexicon.Validate(model.phones);
  graph_ = BuildDecodingGraph(lexicon, model);
  words_ = lexicon.Words();
  for (const auto &w : words_) lm_ids_.push_back(lm.Vocab().Id(w));

  // breadth-first search backwards from the final states
  const StateGraph &g = graph_.graph;
  const int S = static_cast<int>(g.NumStates());
  frames_to_final_.assign(S, std::numeric_limits<int>::max());
  std::deque<int> queue;
  for (int s = 0; s < S; ++s)
    if (g.IsFinal(s)) {
      frames_to_final_[s] = 0;
      queue.push_back(s);
    }
  while (!queue.empty()) {
    const int s = queue.front();
    queue.pop_front();
    for (int a : g.Incoming(s)) {
      const GraphArc &arc = g.Arcs()[a];
      if (arc.log_prob == kLogZero || frames_to_final_[arc.from] != std::numeric_limits<int>::max())
        continue;
      frames_to_final_[arc.from] = frames_to_final_[s] + 1;
      queue.push_back(arc.from);
    }
  }
}

namespace {

struct HypKey {
  int state;
  std::vector<int> history;  // LM ids, at most order-1 of them
  auto operator<=>(const HypKey &) const = default;
};

struct Hyp {
  double score;
  double am;
  double lm10;
  int trace;         // index into the word trace, -1 for none
  int pending_word;  // word entered on the last arc, not yet in the trace
};

struct TraceEntry {
  int word;
  int prev;
};

}  // namespace

DecodeResult Decoder::Decode(const FeatureMatrix &feats) const {
  return Decode(model_.EmissionScores(feats));
}

DecodeResult Decoder::Decode(const Matrix &scores) const {
  const std::size_t T = scores.NumRows();
  if (T == 0) ThrowError(ErrorCode::kInvalidArgument, "no frames to decode");
  const StateGraph &g = graph_.graph;
  for (const auto &s : g.States())
    if (s.emission >= static_cast<int>(scores.NumCols()))
      ThrowError(ErrorCode::kDimensionMismatch, "score matrix has ", scores.NumCols(),
                 " columns, graph needs emission ", s.emission);
  const double lm_weight = cfg_.lm_scale * std::numbers::ln10;
  const std::size_t max_hist = std::max(lm_.Order() - 1, 0);

  std::vector<TraceEntry> trace;
  std::map<std::pair<std::vector<int>, int>, double> lm_cache;
  auto lm_logprob = [&](const std::vector<int> &hist, int word) {
    auto key = std::make_pair(hist, word);
    auto it = lm_cache.find(key);
    if (it != lm_cache.end()) return it->second;
    const double v = lm_.LogProb(word, hist);
    lm_cache.emplace(std::move(key), v);
    return v;
  };
  auto extend = [&](const std::vector<int> &hist, int lm_id) {
    std::vector<int> h = hist;
    h.push_back(lm_id);
    if (h.size() > max_hist) h.erase(h.begin(), h.end() - max_hist);
    return h;
  };
  auto relax = [](std::map<HypKey, Hyp> &m, HypKey key, const Hyp &h) {
    auto [it, inserted] = m.try_emplace(std::move(key), h);
    if (!inserted && h.score > it->second.score) it->second = h;
  };
  auto commit = [&](std::map<HypKey, Hyp> &m) {
    for (auto &[k, h] : m)
      if (h.pending_word >= 0) {
        trace.push_back({h.pending_word, h.trace});
        h.trace = static_cast<int>(trace.size()) - 1;
        h.pending_word = -1;
      }
  };
  auto prune = [&](std::map<HypKey, Hyp> &m, std::size_t t) {
    const std::size_t left = T - 1 - t;
    std::erase_if(m, [&](const auto &kv) {
      return static_cast<std::size_t>(frames_to_final_[kv.first.state]) > left;
    });
    if (m.empty()) return;
    double best = -std::numeric_limits<double>::infinity();
    for (const auto &[k, h] : m) best = std::max(best, h.score);
    const double thresh = best - cfg_.beam_logwidth;
    std::erase_if(m, [&](const auto &kv) { return kv.second.score < thresh; });
    if (cfg_.max_active > 0 && m.size() > static_cast<std::size_t>(cfg_.max_active)) {
      std::vector<std::pair<double, HypKey>> order;
      for (const auto &[k, h] : m) order.emplace_back(h.score, k);
      // stable: equal scores keep key order
      std::stable_sort(order.begin(), order.end(),
                       [](const auto &a, const auto &b) { return a.first > b.first; });
      std::map<HypKey, Hyp> kept;
      for (int i = 0; i < cfg_.max_active; ++i) kept.emplace(order[i].second, m.at(order[i].second));
      m.swap(kept);
    }
  };

  std::vector<int> start_hist;
  if (max_hist > 0) start_hist.push_back(Vocabulary::kBos);

  std::map<HypKey, Hyp> active;
  for (std::size_t i = 0; i < g.Initial().size(); ++i) {
    const int s = g.Initial()[i];
    const int word = graph_.initial_word[i];
    Hyp h{0.0, 0.0, 0.0, -1, -1};
    std::vector<int> hist = start_hist;
    if (word >= 0) {
      const double lp = lm_logprob(hist, lm_ids_[word]);
      h.lm10 += lp;
      h.score += lm_weight * lp;
      h.pending_word = word;
      hist = extend(hist, lm_ids_[word]);
    }
    const double e = scores(0, g.States()[s].emission);
    h.am += e;
    h.score += cfg_.am_scale * e;
    relax(active, {s, std::move(hist)}, h);
  }
  prune(active, 0);
  commit(active);

  for (std::size_t t = 1; t < T && !active.empty(); ++t) {
    std::map<HypKey, Hyp> next;
    for (const auto &[key, h] : active) {
      for (int a : g.Outgoing(key.state)) {
        const GraphArc &arc = g.Arcs()[a];
        if (arc.log_prob == kLogZero) continue;
        Hyp nh = h;
        nh.pending_word = -1;
        nh.am += arc.log_prob;
        nh.score += cfg_.am_scale * arc.log_prob;
        const int word = graph_.arc_word[a];
        if (word >= 0) {
          const double lp = lm_logprob(key.history, lm_ids_[word]);
          nh.lm10 += lp;
          nh.score += lm_weight * lp;
          nh.pending_word = word;
          relax(next, {arc.to, extend(key.history, lm_ids_[word])}, nh);
        } else {
          relax(next, {arc.to, key.history}, nh);
        }
      }
    }
    for (auto &[key, h] : next) {
      const double e = scores(t, g.States()[key.state].emission);
      h.am += e;
      h.score += cfg_.am_scale * e;
    }
    prune(next, t);
    commit(next);
    active.swap(next);
  }

  const Hyp *best = nullptr;
  double best_score = -std::numeric_limits<double>::infinity();
  double best_lm = 0.0;
  for (const auto &[key, h] : active) {
    if (!g.IsFinal(key.state) || h.trace < 0) continue;
    const double lp = lm_logprob(key.history, Vocabulary::kEos);
    const double total = h.score + lm_weight * lp;
    if (best == nullptr || total > best_score) {
      best = &h;
      best_score = total;
      best_lm = h.lm10 + lp;
    }
  }
  if (best == nullptr || !std::isfinite(best_score))
    ThrowError(ErrorCode::kNoHypothesis, "no complete hypothesis survived the search");

  DecodeResult res;
  res.log_score = best_score;
  res.am_log_likelihood = best->am;
  res.lm_log10_prob = best_lm;
  for (int i = best->trace; i >= 0; i = trace[i].prev) res.words.push_back(words_[trace[i].word]);
  std::reverse(res.words.begin(), res.words.end());
  return res;
}

}  // namespace asrlab

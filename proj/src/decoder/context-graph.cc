// decoder/context-graph.cc

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

#include "decoder/context-graph.h"

#include <map>
#include <set>

#include "base/asr-error.h"

namespace asrlab {

int PhoneGraph::AddNode(const PhoneNode &node) {
  nodes.push_back(node);
  return static_cast<int>(nodes.size()) - 1;
}

namespace {

struct Copy {
  int left, right;
  int first_state;
};

struct NextArc {
  int from, to;
  bool internal;
  int word;
};

std::vector<int> PhoneIds(const Pronunciation &pron, const PhoneSet &phones) {
  std::vector<int> ids;
  for (const auto &p : pron) {
    const int id = phones.Index(p);
    if (id < 0) ThrowError(ErrorCode::kInvalidArgument, "unknown phone ", p);
    ids.push_back(id);
  }
  return ids;
}

// Adds one chain of phone nodes for a pronunciation; returns {entry, exit}.
std::pair<int, int> AddPronunciation(PhoneGraph *pg, const std::vector<int> &phones, int word,
                                     int group) {
  int first = -1, prev = -1;
  for (std::size_t i = 0; i < phones.size(); ++i) {
    PhoneNode n;
    n.phone = phones[i];
    n.word = word;
    n.word_start = i == 0;
    n.group = group;
    const int id = pg->AddNode(n);
    if (prev >= 0) pg->AddArc(prev, id, true);
    if (i == 0) first = id;
    prev = id;
  }
  return {first, prev};
}

int AddSilence(PhoneGraph *pg, int silence, int group) {
  PhoneNode n;
  n.phone = silence;
  n.group = group;
  return pg->AddNode(n);
}

}  // namespace

ContextGraph BuildContextGraph(const PhoneGraph &pg, const AcousticModel &model) {
  const int sil = model.phones.Silence();
  const int spp = model.topology.states_per_phone;
  const std::size_t N = pg.nodes.size();
  std::vector<std::set<int>> lefts(N), rights(N);
  for (const auto &a : pg.arcs) {
    lefts[a.to].insert(pg.nodes[a.from].phone);
    rights[a.from].insert(pg.nodes[a.to].phone);
  }
  ContextGraph out;
  StateGraph &g = out.graph;
  std::vector<std::vector<Copy>> copies(N);
  for (std::size_t n = 0; n < N; ++n) {
    const PhoneNode &node = pg.nodes[n];
    if (node.initial) lefts[n].insert(sil);
    if (node.final) rights[n].insert(sil);
    std::vector<std::pair<int, int>> ctx;
    if (node.phone == sil) {
      ctx.emplace_back(sil, sil);
    } else {
      for (int l : lefts[n])
        for (int r : rights[n]) ctx.emplace_back(l, r);
    }
    for (auto [l, r] : ctx) {
      Copy c{l, r, static_cast<int>(g.NumStates())};
      for (int pos = 0; pos < spp; ++pos)
        g.AddState({0, pos, ContextState{l, node.phone, r, pos}});
      copies[n].push_back(c);
    }
  }
  out.node_copies.resize(N);
  for (std::size_t n = 0; n < N; ++n)
    for (const Copy &c : copies[n]) out.node_copies[n].push_back(c.first_state);

  std::vector<NextArc> next;
  for (std::size_t n = 0; n < N; ++n)
    for (const Copy &c : copies[n])
      for (int pos = 0; pos + 1 < spp; ++pos)
        next.push_back({c.first_state + pos, c.first_state + pos + 1, true, -1});
  for (const auto &a : pg.arcs) {
    const PhoneNode &from = pg.nodes[a.from], &to = pg.nodes[a.to];
    const int word = !a.internal && to.word_start ? to.word : -1;
    for (const Copy &cf : copies[a.from]) {
      if (from.phone != sil && cf.right != to.phone) continue;
      for (const Copy &ct : copies[a.to]) {
        if (to.phone != sil && ct.left != from.phone) continue;
        next.push_back({cf.first_state + spp - 1, ct.first_state, a.internal, word});
      }
    }
  }

  const int S = static_cast<int>(g.NumStates());
  for (int s = 0; s < S; ++s) {
    g.AddArc(s, s, TransitionType::kStay);
    out.arc_word.push_back(-1);
  }
  std::vector<std::vector<int>> internal_next(S);
  for (const NextArc &a : next) {
    g.AddArc(a.from, a.to, TransitionType::kNext);
    out.arc_word.push_back(a.word);
    if (a.internal) internal_next[a.from].push_back(a.to);
  }
  for (int u = 0; u < S; ++u) {
    std::set<int> targets;
    for (int v : internal_next[u])
      for (int w : internal_next[v]) targets.insert(w);
    for (int w : targets) {
      g.AddArc(u, w, TransitionType::kSkip);
      out.arc_word.push_back(-1);
    }
  }

  for (std::size_t n = 0; n < N; ++n) {
    const PhoneNode &node = pg.nodes[n];
    for (const Copy &c : copies[n]) {
      if (node.initial && (node.phone == sil || c.left == sil)) {
        g.AddInitial(c.first_state);
        out.initial_word.push_back(node.word_start ? node.word : -1);
      }
      if (node.final && (node.phone == sil || c.right == sil)) g.SetFinal(c.first_state + spp - 1);
    }
  }
  model.ResolveGraph(&g);
  return out;
}

StateGraph ExpandTranscript(const std::vector<std::string> &words, const Lexicon &lexicon,
                            const AcousticModel &model, const ExpandOptions &opts) {
  const int sil = model.phones.Silence();
  PhoneGraph pg;
  int group = 0;
  std::vector<int> prev_exits;  // exits of the previous word
  int prev_sil = -1;
  bool at_start = true;
  std::vector<std::vector<int>> canonical;  // phone nodes of the first pronunciations

  auto add_optional_silence = [&]() {
    if (!opts.optional_silence) return -1;
    const int s = AddSilence(&pg, sil, group++);
    if (at_start) pg.nodes[s].initial = true;
    for (int e : prev_exits) pg.AddArc(e, s, false);
    return s;
  };

  for (std::size_t i = 0; i < words.size(); ++i) {
    std::string w = words[i];
    if (!lexicon.Contains(w)) {
      if (opts.unknown_word.empty() || !lexicon.Contains(opts.unknown_word))
        ThrowError(ErrorCode::kMissingWord, "word not in lexicon: ", w);
      w = opts.unknown_word;
    }
    prev_sil = add_optional_silence();
    std::vector<int> exits;
    bool first_pron = true;
    for (const auto &pron : lexicon.Prons(w)) {
      auto ids = PhoneIds(pron, model.phones);
      auto [entry, exit] = AddPronunciation(&pg, ids, lexicon.WordId(w), group++);
      if (at_start) pg.nodes[entry].initial = true;
      for (int e : prev_exits) pg.AddArc(e, entry, false);
      if (prev_sil >= 0) pg.AddArc(prev_sil, entry, false);
      exits.push_back(exit);
      if (first_pron) {
        std::vector<int> nodes;
        for (int n = entry; n <= exit; ++n) nodes.push_back(n);
        canonical.push_back(nodes);
        first_pron = false;
      }
    }
    prev_exits = exits;
    at_start = false;
  }
  const int last_sil = add_optional_silence();
  if (last_sil >= 0) pg.nodes[last_sil].final = true;
  for (int e : prev_exits) pg.nodes[e].final = true;
  if (pg.nodes.empty())
    ThrowError(ErrorCode::kInvalidArgument, "empty transcript without optional silence");

  ContextGraph cg = BuildContextGraph(pg, model);
  StateGraph &g = cg.graph;
  g.canonical_path.clear();

  // canonical path: the unique copy sequence along the first pronunciations
  std::vector<int> path_nodes;
  for (const auto &c : canonical) path_nodes.insert(path_nodes.end(), c.begin(), c.end());
  if (path_nodes.empty()) path_nodes.push_back(last_sil);
  const int spp = model.topology.states_per_phone;
  for (std::size_t k = 0; k < path_nodes.size(); ++k) {
    const PhoneNode &node = pg.nodes[path_nodes[k]];
    const int l = k == 0 ? sil : pg.nodes[path_nodes[k - 1]].phone;
    const int r = k + 1 == path_nodes.size() ? sil : pg.nodes[path_nodes[k + 1]].phone;
    for (int first : cg.node_copies[path_nodes[k]]) {
      const ContextState &ctx = g.States()[first].context;
      if (node.phone == sil || (ctx.left == l && ctx.right == r)) {
        for (int p = 0; p < spp; ++p) g.canonical_path.push_back(first + p);
        break;
      }
    }
  }
  return std::move(g);
}

ContextGraph BuildDecodingGraph(const Lexicon &lexicon, const AcousticModel &model) {
  if (lexicon.NumWords() == 0) ThrowError(ErrorCode::kInvalidArgument, "empty lexicon");
  const int sil = model.phones.Silence();
  PhoneGraph pg;
  int group = 0;
  const int lead = AddSilence(&pg, sil, group++);
  pg.nodes[lead].initial = true;
  const int inter = AddSilence(&pg, sil, group++);
  pg.nodes[inter].final = true;
  std::vector<int> entries, exits;
  for (const auto &w : lexicon.Words())
    for (const auto &pron : lexicon.Prons(w)) {
      auto [entry, exit] =
          AddPronunciation(&pg, PhoneIds(pron, model.phones), lexicon.WordId(w), group++);
      pg.nodes[entry].initial = true;
      pg.nodes[exit].final = true;
      entries.push_back(entry);
      exits.push_back(exit);
    }
  for (int e : entries) {
    pg.AddArc(lead, e, false);
    pg.AddArc(inter, e, false);
  }
  for (int x : exits) {
    pg.AddArc(x, inter, false);
    for (int e : entries) pg.AddArc(x, e, false);
  }
  return BuildContextGraph(pg, model);
}

}  // namespace asrlab

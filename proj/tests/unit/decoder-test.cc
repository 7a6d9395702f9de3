// tests/unit/decoder-test.cc

// Copyright 2026  asrlab authors

// See ../../../COPYING for clarification regarding multiple authors
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

#include <cmath>
#include <functional>
#include <map>
#include <numbers>
#include <tuple>

#include "doctest.h"

#include "base/asr-error.h"
#include "base/math-utils.h"
#include "base/rand.h"
#include "decoder/context-graph.h"
#include "decoder/decoder.h"
#include "decoder/lexicon.h"
#include "decoder/wer.h"
#include "hmm/cart.h"
#include "lm/ngram-counts.h"

using namespace asrlab;

namespace {

// phones: sil=0 a=1 b=2 c=3 d=4
AcousticModel ToyModel(CartTree tree, HmmTopology topo = HmmTopology::FromProbs(3, 0.5, 0.35, 0.15)) {
  AcousticModel m;
  m.phones = PhoneSet({"sil", "a", "b", "c", "d"}, "sil");
  m.topology = topo;
  m.tree = std::move(tree);
  for (int i = 0; i < m.tree.NumLeaves(); ++i)
    m.emissions.emplace_back(std::vector<double>{static_cast<double>(i)}, std::vector<double>{1.0});
  return m;
}

// Context-dependent tree grown from random statistics.
CartTree RandomTree(Rng &rng, int max_leaves) {
  std::vector<CartStats> stats;
  for (int l = 0; l < 5; ++l)
    for (int c = 0; c < 5; ++c)
      for (int r = 0; r < 5; ++r)
        for (int p = 0; p < 3; ++p) {
          const double m = rng.Gauss() * 3;
          stats.push_back({{l, c, r, p}, 5.0, {5 * m}, {5 * (m * m + 0.5)}});
        }
  CartOptions o;
  o.max_leaves = max_leaves;
  return BuildCart(stats, DefaultQuestions(5, 0, 3), o);
}

Lexicon ToyLexicon() {
  return ParseLexicon("w1\ta b\nw2\tb c\nw3\tc a\nw3\td\n");
}

// Explicit linear chain for one (silence choice, pronunciation choice)
// variant: skips only inside a unit.
StateGraph VariantChain(const std::vector<std::pair<std::vector<int>, bool>> &units,
                        const AcousticModel &m) {
  const int sil = 0, spp = 3;
  std::vector<int> phones, unit_of;
  for (std::size_t u = 0; u < units.size(); ++u)
    for (int p : units[u].first) {
      phones.push_back(p);
      unit_of.push_back(u);
    }
  StateGraph g;
  for (std::size_t k = 0; k < phones.size(); ++k) {
    const int l = k == 0 ? sil : phones[k - 1], r = k + 1 == phones.size() ? sil : phones[k + 1];
    for (int pos = 0; pos < spp; ++pos) {
      ContextState ctx = phones[k] == sil ? ContextState{sil, sil, sil, pos}
                                          : ContextState{l, phones[k], r, pos};
      g.AddState({m.tree.Leaf(ctx), pos, ctx});
    }
  }
  const int S = static_cast<int>(g.NumStates());
  for (int s = 0; s < S; ++s) g.AddArc(s, s, TransitionType::kStay);
  for (int s = 0; s + 1 < S; ++s) g.AddArc(s, s + 1, TransitionType::kNext);
  for (int s = 0; s + 2 < S; ++s)
    if (unit_of[s / spp] == unit_of[(s + 2) / spp] && unit_of[s / spp] == unit_of[(s + 1) / spp])
      g.AddArc(s, s + 2, TransitionType::kSkip);
  g.AddInitial(0);
  g.SetFinal(S - 1);
  g.Reweight(m.topology);
  return g;
}

Matrix RandomScores(Rng &rng, std::size_t T, int E) {
  Matrix m(T, E);
  for (double &v : m.Data()) v = -4.0 * rng.Uniform();
  return m;
}

}  // namespace

TEST_CASE("lexicon") {
  Lexicon lex = ParseLexicon("hello\th e l o\nhello h a l o\nworld\tw o r l d\nhello\th e l o\n");
  CHECK(lex.NumWords() == 2);
  CHECK(lex.Prons("hello").size() == 2);
  CHECK(lex.WordId("world") == 1);
  CHECK(lex.WordId("nope") == -1);
  CHECK_THROWS_AS(lex.Add("x", {}), AsrError);
  CHECK_THROWS_AS(ParseLexicon("lonely\n"), AsrError);
  Lexicon extra = ParseLexicon("aspirin\ta s p\n");
  lex.Merge(extra);
  CHECK(lex.Contains("aspirin"));
  CHECK_THROWS_AS(ToyLexicon().Validate(PhoneSet({"sil", "a"}, "sil")), AsrError);
}

TEST_CASE("expand_transcript structure") {
  AcousticModel m = ToyModel(CartTree::Monophone(5, 3));
  Lexicon lex = ToyLexicon();
  ExpandOptions plain;
  plain.optional_silence = false;

  StateGraph one = ExpandTranscript({"w1"}, lex, m, plain);
  CHECK(one.NumStates() == 6);
  CHECK(one.Initial() == std::vector<int>{0});
  CHECK(one.IsFinal(5));
  int stay = 0, next = 0, skip = 0;
  for (const auto &a : one.Arcs()) {
    stay += a.type == TransitionType::kStay;
    next += a.type == TransitionType::kNext;
    skip += a.type == TransitionType::kSkip;
  }
  CHECK(stay == 6);
  CHECK(next == 5);
  CHECK(skip == 4);
  CHECK(one.canonical_path == std::vector<int>{0, 1, 2, 3, 4, 5});
  for (int s = 0; s < 6; ++s) CHECK(one.States()[s].emission == (s < 3 ? 3 + s : 6 + s - 3));

  // two pronunciations: parallel branches, both initial and final
  StateGraph alt = ExpandTranscript({"w3"}, lex, m, plain);
  CHECK(alt.NumStates() == 9);
  CHECK(alt.Initial().size() == 2);
  int finals = 0;
  for (std::size_t s = 0; s < alt.NumStates(); ++s) finals += alt.IsFinal(s);
  CHECK(finals == 2);

  try {
    ExpandTranscript({"w1", "zzz"}, lex, m);
    FAIL("expected MissingWord");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kMissingWord);
  }
  Lexicon with_unk = lex;
  with_unk.Add("<unk>", {"d"});
  ExpandOptions unk;
  unk.unknown_word = "<unk>";
  CHECK(ExpandTranscript({"w1", "zzz"}, with_unk, m, unk).NumStates() > 0);
}

TEST_CASE("cross-word contexts follow a hand walk of the tree") {
  // left=a ? (right=sil ? 0 : 1) : (center=b ? 2 : (position=0 ? 3 : 4))
  std::vector<PhoneticQuestion> qs{{ContextKey::kLeft, {1}, "left=a"},
                                   {ContextKey::kRight, {0}, "right=sil"},
                                   {ContextKey::kCenter, {2}, "center=b"},
                                   {ContextKey::kPosition, {0}, "position=0"}};
  std::vector<CartNode> nodes{{0, 1, 4, -1}, {1, 2, 3, -1}, {-1, -1, -1, 0}, {-1, -1, -1, 1},
                              {2, 5, 6, -1}, {-1, -1, -1, 2}, {3, 7, 8, -1},
                              {-1, -1, -1, 3}, {-1, -1, -1, 4}};
  AcousticModel m = ToyModel(CartTree(qs, nodes));
  REQUIRE(m.tree.NumLeaves() == 5);
  auto hand = [](int l, int c, int r, int pos) {
    if (l == 1) return r == 0 ? 0 : 1;
    if (c == 2) return 2;
    return pos == 0 ? 3 : 4;
  };
  Lexicon lex = ParseLexicon("x\ta b\ny\tc a\n");
  ExpandOptions plain;
  plain.optional_silence = false;
  StateGraph g = ExpandTranscript({"x", "y"}, lex, m, plain);
  REQUIRE(g.NumStates() == 12);
  // a(sil,a,b) b(a,b,c) c(b,c,a) a(c,a,sil)
  const int ctx[4][3] = {{0, 1, 2}, {1, 2, 3}, {2, 3, 1}, {3, 1, 0}};
  REQUIRE(g.canonical_path.size() == 12);
  for (int k = 0; k < 4; ++k)
    for (int pos = 0; pos < 3; ++pos) {
      const GraphState &s = g.States()[g.canonical_path[3 * k + pos]];
      CHECK(s.context.left == ctx[k][0]);
      CHECK(s.context.right == ctx[k][2]);
      CHECK(s.emission == hand(ctx[k][0], ctx[k][1], ctx[k][2], pos));
    }
  // with optional silence the boundary phones get a silence-context copy
  StateGraph gs = ExpandTranscript({"x", "y"}, lex, m);
  CHECK(gs.NumStates() == 27);
}

TEST_CASE("expanded graph sums exactly over explicit variants") {
  Rng rng(31);
  AcousticModel m = ToyModel(RandomTree(rng, 18));
  Lexicon lex = ToyLexicon();
  const int sil = 0;
  const std::vector<std::vector<int>> w1{{1, 2}}, w3{{3, 1}, {4}};
  for (int trial = 0; trial < 8; ++trial) {
    const std::size_t T = 8 + rng.Index(8);
    Matrix sc = RandomScores(rng, T, m.NumEmissions());
    StateGraph g = ExpandTranscript({"w1", "w3"}, lex, m);
    double oracle = kLogZero;
    for (int mask = 0; mask < 8; ++mask)
      for (const auto &p3 : w3) {
        std::vector<std::pair<std::vector<int>, bool>> units;
        if (mask & 1) units.push_back({{sil}, true});
        units.push_back({w1[0], false});
        if (mask & 2) units.push_back({{sil}, true});
        units.push_back({p3, false});
        if (mask & 4) units.push_back({{sil}, true});
        StateGraph v = VariantChain(units, m);
        try {
          oracle = LogAdd(oracle, ForwardLogLikelihood(v, sc));
        } catch (const AsrError &) {
        }
      }
    CHECK(ForwardLogLikelihood(g, sc) == doctest::Approx(oracle).epsilon(1e-11));
  }
}

namespace {

struct Best {
  std::vector<std::string> words;
  double score = -1e300;
};

// Exhaustive search over every word sequence of length 1..max_len.
Best ExhaustiveDecode(const Matrix &sc, const AcousticModel &m, const Lexicon &lex,
                      const LanguageModel &lm, double am_scale, double lm_scale, int max_len) {
  Best best;
  const auto words = lex.Words();
  std::vector<std::string> seq;
  std::function<void()> rec = [&]() {
    if (!seq.empty()) {
      StateGraph g = ExpandTranscript(seq, lex, m);
      try {
        const double am = ViterbiAlign(g, sc).log_prob;
        std::vector<std::string> hist{"<s>"};
        double lp = 0;
        for (const auto &w : seq) {
          lp += lm.LogProb(w, hist);
          hist.push_back(w);
        }
        lp += lm.LogProb("</s>", hist);
        const double total = am_scale * am + lm_scale * std::numbers::ln10 * lp;
        if (total > best.score) best = {seq, total};
      } catch (const AsrError &e) {
        REQUIRE(e.code() == ErrorCode::kNoPath);
      }
    }
    if (static_cast<int>(seq.size()) == max_len) return;
    for (const auto &w : words) {
      seq.push_back(w);
      rec();
      seq.pop_back();
    }
  };
  rec();
  return best;
}

}  // namespace

TEST_CASE("decode with infinite beam equals exhaustive search") {
  Rng rng(77);
  Lexicon lex = ToyLexicon();
  TextCorpus text{{"w1", "w2"}, {"w2", "w3", "w1"}, {"w3"}, {"w1", "w1"}};
  NGramModel bigram = EstimateKneserNey(CountNGrams(text, 2));
  NGramModel trigram = EstimateKneserNey(CountNGrams(text, 3));
  // each word needs >= 4 frames and skips never cross words, so T <= 15
  // admits at most three words
  for (int trial = 0; trial < 24; ++trial) {
    AcousticModel m = ToyModel(trial % 2 ? RandomTree(rng, 12) : CartTree::Monophone(5, 3));
    const LanguageModel &lm = trial % 3 ? static_cast<const LanguageModel &>(bigram) : trigram;
    DecodeConfig cfg;
    cfg.am_scale = trial % 4 == 0 ? 1.0 : 0.5 + rng.Uniform();
    cfg.lm_scale = trial % 4 == 0 ? 1.0 : 0.5 + 3 * rng.Uniform();
    const std::size_t T = 5 + rng.Index(11);
    Matrix sc = RandomScores(rng, T, m.NumEmissions());
    Decoder dec(m, lex, lm, cfg);
    DecodeResult r = dec.Decode(sc);
    Best ex = ExhaustiveDecode(sc, m, lex, lm, cfg.am_scale, cfg.lm_scale, 3);
    CHECK(r.words == ex.words);
    CHECK(r.log_score == doctest::Approx(ex.score).epsilon(1e-10));
    CHECK(r.log_score == doctest::Approx(cfg.am_scale * r.am_log_likelihood +
                                         cfg.lm_scale * std::numbers::ln10 * r.lm_log10_prob)
                             .epsilon(1e-10));

    // common rescaling leaves the hypothesis unchanged
    DecodeConfig scaled = cfg;
    scaled.am_scale *= 2.5;
    scaled.lm_scale *= 2.5;
    DecodeResult rs = Decoder(m, lex, lm, scaled).Decode(sc);
    CHECK(rs.words == r.words);
    CHECK(rs.log_score == doctest::Approx(2.5 * r.log_score).epsilon(1e-10));

    // a finite beam never beats the exact search; reachable hypotheses
    // always complete, so a result always exists
    for (double beam : {30.0, 10.0, 5.0, 2.0, 1.0, 0.0}) {
      DecodeConfig b = cfg;
      b.beam_logwidth = beam;
      const double s = Decoder(m, lex, lm, b).Decode(sc).log_score;
      CHECK(s <= r.log_score + 1e-9);
    }
    DecodeConfig capped = cfg;
    capped.max_active = 3;
    const double capped_score = Decoder(m, lex, lm, capped).Decode(sc).log_score;
    CHECK(capped_score <= r.log_score + 1e-9);
  }
}

TEST_CASE("decode recovers a sampled word") {
  // disjoint acoustics: leaf i emits around 10*i
  AcousticModel m = ToyModel(CartTree::Monophone(5, 3));
  for (int i = 0; i < m.NumEmissions(); ++i)
    m.emissions[i] = DiagGmm(std::vector<double>{10.0 * i}, std::vector<double>{1.0});
  Lexicon lex = ParseLexicon("one\ta b\ntwo\tc d\n");
  NGramModel lm = NGramModel::Uniform(Vocabulary({"one", "two"}));
  Rng rng(5);
  for (const std::string target : {"one", "two"}) {
    StateGraph g = ExpandTranscript({target}, lex, m, {false, ""});
    FeatureMatrix f;
    for (int s : g.canonical_path)
      for (int k = 0; k < 3; ++k)
        f.frames.AppendRow(std::vector<double>{10.0 * g.States()[s].emission + 0.3 * rng.Gauss()});
    DecodeResult r = Decoder(m, lex, lm).Decode(f);
    CHECK(r.words == std::vector<std::string>{target});
  }
}

TEST_CASE("decode errors") {
  AcousticModel m = ToyModel(CartTree::Monophone(5, 3));
  Lexicon lex = ToyLexicon();
  NGramModel lm = NGramModel::Uniform(Vocabulary(lex.Words()));
  Decoder dec(m, lex, lm);
  Rng rng(2);
  try {
    dec.Decode(RandomScores(rng, 1, m.NumEmissions()));  // no word fits in one frame
    FAIL("expected NoHypothesis");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kNoHypothesis);
  }
  CHECK_THROWS_AS(dec.Decode(Matrix(0, m.NumEmissions())), AsrError);
  CHECK_THROWS_AS(dec.Decode(RandomScores(rng, 10, 3)), AsrError);
  DecodeConfig bad;
  bad.lm_scale = 0.0;
  CHECK_THROWS_AS(Decoder(m, lex, lm, bad), AsrError);
}

namespace {

struct Counts {
  long e, s, i, d;
};

// Exhaustive enumeration of every alignment path.
Counts BruteForceWer(const std::vector<std::string> &r, const std::vector<std::string> &h) {
  Counts best{1 << 30, 0, 0, 0};
  std::function<void(std::size_t, std::size_t, Counts)> rec = [&](std::size_t i, std::size_t j,
                                                                  Counts c) {
    if (i == r.size() && j == h.size()) {
      if (c.e < best.e || (c.e == best.e && c.s > best.s)) best = c;
      return;
    }
    if (i < r.size() && j < h.size()) {
      Counts n = c;
      if (r[i] != h[j]) {
        ++n.e;
        ++n.s;
      }
      rec(i + 1, j + 1, n);
    }
    if (j < h.size()) rec(i, j + 1, {c.e + 1, c.s, c.i + 1, c.d});
    if (i < r.size()) rec(i + 1, j, {c.e + 1, c.s, c.i, c.d + 1});
  };
  rec(0, 0, {0, 0, 0, 0});
  return best;
}

// Memoized recursion over suffixes: minimal edits, then maximal substitutions.
Counts MemoWer(const std::vector<std::string> &r, const std::vector<std::string> &h) {
  std::map<std::pair<std::size_t, std::size_t>, Counts> memo;
  std::function<Counts(std::size_t, std::size_t)> f = [&](std::size_t i, std::size_t j) {
    if (i == r.size()) return Counts{static_cast<long>(h.size() - j), 0, static_cast<long>(h.size() - j), 0};
    if (j == h.size()) return Counts{static_cast<long>(r.size() - i), 0, 0, static_cast<long>(r.size() - i)};
    auto it = memo.find({i, j});
    if (it != memo.end()) return it->second;
    Counts a = f(i + 1, j + 1);
    if (r[i] != h[j]) {
      ++a.e;
      ++a.s;
    }
    Counts b = f(i, j + 1);
    ++b.e;
    ++b.i;
    Counts c = f(i + 1, j);
    ++c.e;
    ++c.d;
    Counts best = a;
    for (const Counts &x : {b, c})
      if (x.e < best.e || (x.e == best.e && x.s > best.s)) best = x;
    memo[{i, j}] = best;
    return best;
  };
  return f(0, 0);
}

std::vector<std::string> RandomWords(Rng &rng, int max_len) {
  std::vector<std::string> w(rng.Index(max_len + 1));
  for (auto &x : w) x = std::string(1, static_cast<char>('a' + rng.Index(4)));
  return w;
}

}  // namespace

TEST_CASE("wer") {
  using V = std::vector<std::string>;
  CHECK(ComputeWer({"a", "b", "c"}, {"a", "b", "c"}).wer == 0.0);
  auto sub = ComputeWer({"a", "b", "c"}, {"a", "x", "c"});
  CHECK(sub.substitutions == 1);
  CHECK(sub.insertions == 0);
  CHECK(sub.deletions == 0);
  CHECK(sub.wer == doctest::Approx(1.0 / 3));
  auto ins = ComputeWer({"a"}, {"x", "y"});
  CHECK(ins.substitutions == 1);
  CHECK(ins.insertions == 1);
  CHECK(ins.wer == 2.0);
  // substitutions preferred over an insertion/deletion pair
  auto pref = ComputeWer({"a", "b"}, {"b", "c"});
  CHECK(pref.substitutions == 2);
  CHECK(pref.insertions + pref.deletions == 0);
  try {
    ComputeWer({}, {"a"});
    FAIL("expected EmptyReference");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kEmptyReference);
  }

  Rng rng(123);
  for (int trial = 0; trial < 1000; ++trial) {
    V r = RandomWords(rng, 8), h = RandomWords(rng, 8);
    if (r.empty()) r.push_back("a");
    const Counts o = r.size() <= 5 && h.size() <= 5 ? BruteForceWer(r, h) : MemoWer(r, h);
    const WerBreakdown w = ComputeWer(r, h);
    CHECK(w.Errors() == o.e);
    CHECK(w.substitutions == o.s);
    CHECK(w.insertions == o.i);
    CHECK(w.deletions == o.d);
    CHECK(w.wer == static_cast<double>(o.e) / r.size());
  }
}

TEST_CASE("score_corpus") {
  Transcripts ref{{"u1", {"a", "b"}}, {"u2", {"c"}}};
  CHECK(ScoreCorpus(ref, ref).wer == 0.0);
  Rng rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    Transcripts r, h;
    long errs = 0, n = 0;
    for (int u = 0; u < 6; ++u) {
      auto rw = RandomWords(rng, 6);
      if (rw.empty()) rw.push_back("b");
      auto hw = RandomWords(rng, 6);
      const std::string id = "utt" + std::to_string(u);
      r[id] = rw;
      h[id] = hw;
      errs += MemoWer(rw, hw).e;
      n += rw.size();
    }
    auto total = ScoreCorpus(r, h);
    CHECK(total.Errors() == errs);
    CHECK(total.reference_words == n);
    CHECK(total.wer == doctest::Approx(static_cast<double>(errs) / n).epsilon(1e-15));
  }
  Transcripts other{{"u1", {"a", "b"}}, {"u3", {"c"}}};
  try {
    ScoreCorpus(ref, other);
    FAIL("expected IdMismatch");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kIdMismatch);
  }
  CHECK_THROWS_AS(ScoreCorpus(ref, {{"u1", {"a"}}}), AsrError);
  auto parsed = ParseTranscripts("u1 a b\nu2 c\nu3\n");
  CHECK(parsed.at("u1") == std::vector<std::string>{"a", "b"});
  CHECK(parsed.at("u3").empty());
}

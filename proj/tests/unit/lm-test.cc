// tests/unit/lm-test.cc

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
#include <map>
#include <set>
#include <sstream>

#include "doctest.h"

#include "base/asr-error.h"
#include "base/rand.h"
#include "lm/lm-eval.h"
#include "lm/ngram-counts.h"
#include "lm/ngram-model.h"

using namespace asrlab;

namespace {

TextCorpus RandomCorpus(Rng &rng, int sentences, int vocab, int max_len) {
  TextCorpus c;
  for (int s = 0; s < sentences; ++s) {
    std::vector<std::string> sent;
    const int len = 1 + rng.Index(max_len);
    // skewed word distribution so some n-grams repeat
    for (int i = 0; i < len; ++i) {
      const int w = std::min(rng.Index(vocab), rng.Index(vocab));
      sent.push_back("w" + std::to_string(w));
    }
    c.push_back(sent);
  }
  return c;
}

// Direct recursive interpolated Kneser-Ney computed from the raw text.
class KnOracle {
 public:
  KnOracle(const TextCorpus &corpus, int order, double d, std::set<std::string> vocab)
      : order_(order), d_(d), vocab_(std::move(vocab)) {
    vocab_.insert("</s>");
    vocab_.insert("<unk>");
    double words = 0, singles = 0;
    std::map<std::string, int> wc;
    for (const auto &s : corpus) {
      std::vector<std::string> p{"<s>"};
      p.insert(p.end(), s.begin(), s.end());
      p.push_back("</s>");
      padded_.push_back(p);
      for (const auto &w : s) ++wc[w];
    }
    for (const auto &[w, c] : wc) {
      words += c;
      if (c == 1) singles += 1;
    }
    unk_ = singles / words;
  }

  double Prob(const std::string &w, std::vector<std::string> h) const {
    if (static_cast<int>(h.size()) > order_ - 1) h.erase(h.begin(), h.end() - (order_ - 1));
    double p = Kn(w, h, static_cast<int>(h.size()) + 1);
    return p;
  }

 private:
  // effective count of ngram g used at level n (n == order_ -> raw)
  double Eff(const std::vector<std::string> &g, int n) const {
    if (n == order_ || g[0] == "<s>") return Raw(g);
    std::set<std::string> pre;
    for (const auto &p : padded_)
      for (std::size_t i = 1; i + g.size() <= p.size(); ++i)
        if (std::equal(g.begin(), g.end(), p.begin() + i)) pre.insert(p[i - 1]);
    return pre.size();
  }
  double Raw(const std::vector<std::string> &g) const {
    double c = 0;
    for (const auto &p : padded_)
      for (std::size_t i = 0; i + g.size() <= p.size(); ++i)
        if (std::equal(g.begin(), g.end(), p.begin() + i) && i + g.size() >= 2) c += 1;
    return c;
  }
  double Kn(const std::string &w, const std::vector<std::string> &h, int n) const {
    if (h.empty()) {
      double total = 0, types = 0, cw = 0;
      for (const auto &v : vocab_) {
        const double c = Eff({v}, n);
        total += c;
        if (c > 0) types += 1;
        if (v == w) cw = c;
      }
      const double p = std::max(cw - d_, 0.0) / total + d_ * types / total / vocab_.size();
      return (1 - unk_) * p + (w == "<unk>" ? unk_ : 0.0);
    }
    std::vector<std::string> lower(h.begin() + 1, h.end());
    double ch = 0, types = 0, cw = 0;
    for (const auto &v : vocab_) {
      auto g = h;
      g.push_back(v);
      const double c = Eff(g, n);
      ch += c;
      if (c > 0) types += 1;
      if (v == w) cw = c;
    }
    if (ch == 0) return Kn(w, lower, n - 1);
    return std::max(cw - d_, 0.0) / ch + d_ * types / ch * Kn(w, lower, n - 1);
  }

  int order_;
  double d_;
  std::set<std::string> vocab_;
  std::vector<std::vector<std::string>> padded_;
  double unk_ = 0;
};

double SumOverVocab(const LanguageModel &lm, const std::vector<int> &hist) {
  double s = 0;
  for (int w = 0; w < lm.Vocab().Size(); ++w)
    if (w != Vocabulary::kBos) s += std::pow(10.0, lm.LogProb(w, hist));
  return s;
}

}  // namespace

TEST_CASE("count_ngrams") {
  auto c = CountNGrams({{"a", "b"}}, 2);
  CHECK(c.tables[1].size() == 3);
  CHECK(c.Count({"<s>", "a"}) == 1);
  CHECK(c.Count({"a", "b"}) == 1);
  CHECK(c.Count({"b", "</s>"}) == 1);
  CHECK(c.Count({"<s>"}) == 0);
  CHECK(c.Count({"</s>"}) == 1);
  CHECK(CountNGrams({}, 3).Empty());
  CHECK_THROWS_AS(CountNGrams({}, 0), AsrError);

  Rng rng(3);
  for (int trial = 0; trial < 10; ++trial) {
    TextCorpus corpus = RandomCorpus(rng, 15, 5, 6);
    auto counts = CountNGrams(corpus, 3);
    // naive recount: every window of the padded sentence except the lone <s>
    std::map<NGram, long> naive;
    for (const auto &s : corpus) {
      NGram p{"<s>"};
      p.insert(p.end(), s.begin(), s.end());
      p.push_back("</s>");
      for (std::size_t a = 0; a < p.size(); ++a)
        for (std::size_t b = a + 1; b <= p.size() && b - a <= 3; ++b)
          if (!(a == 0 && b == 1)) ++naive[NGram(p.begin() + a, p.begin() + b)];
    }
    std::map<NGram, long> got;
    for (const auto &t : counts.tables) got.insert(t.begin(), t.end());
    CHECK(got == naive);
    // merge of halves equals counting the whole
    TextCorpus h1(corpus.begin(), corpus.begin() + 7), h2(corpus.begin() + 7, corpus.end());
    auto merged = CountNGrams(h1, 3);
    merged.Add(CountNGrams(h2, 3));
    CHECK(merged.tables == counts.tables);
  }
}

TEST_CASE("kneser-ney hand oracle on a 4-token corpus") {
  auto lm = EstimateKneserNey(CountNGrams({{"a", "b", "a", "b"}}, 2), {{0.5}});
  // bigrams (<s>,a)1 (a,b)2 (b,a)1 (b,</s>)1
  // continuation: N(.a)=2 {<s>,b}, N(.b)=1, N(.</s>)=1, total 4, 3 types
  // predictable vocabulary {a, b, </s>, <unk>}; no singleton words
  const double lambda_uni = 0.5 * 3 / 4;
  const double p_uni_b = (1 - 0.5) / 4 + lambda_uni / 4;
  const double p_uni_a = (2 - 0.5) / 4 + lambda_uni / 4;
  const double p_uni_unk = lambda_uni / 4;
  const double lambda_a = 0.5 * 1 / 2;
  const double p_b_a = (2 - 0.5) / 2 + lambda_a * p_uni_b;
  CHECK(p_b_a == doctest::Approx(0.8046875).epsilon(1e-15));
  CHECK(std::pow(10, lm.LogProb("b", {"a"})) == doctest::Approx(p_b_a).epsilon(1e-12));
  CHECK(std::pow(10, lm.LogProb("a", {"a"})) ==
        doctest::Approx(lambda_a * p_uni_a).epsilon(1e-12));
  // history b: c=2, two continuations
  const double lambda_b = 0.5 * 2 / 2;
  CHECK(std::pow(10, lm.LogProb("a", {"b"})) ==
        doctest::Approx(0.5 / 2 + lambda_b * p_uni_a).epsilon(1e-12));
  CHECK(std::pow(10, lm.LogProb("zzz", {"a"})) ==
        doctest::Approx(lambda_a * p_uni_unk).epsilon(1e-12));
  CHECK(std::pow(10, lm.LogProb("a", {})) == doctest::Approx(p_uni_a).epsilon(1e-12));
}

TEST_CASE("kneser-ney matches recursive oracle and normalizes") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int order = 1 + trial % 4;
    TextCorpus corpus = RandomCorpus(rng, 12, 6, 7);
    const double d = 0.3 + 0.6 * rng.Uniform();
    auto lm = EstimateKneserNey(CountNGrams(corpus, order), {{d}});
    for (const auto &h : lm.Histories()) {
      const double s = SumOverVocab(lm, h);
      CHECK(std::abs(s - 1.0) < 1e-9);
    }
    for (int t = 1; t <= order; ++t)
      for (const auto &[k, e] : lm.GetTable(t)) CHECK(std::isfinite(e.log_bow));

    if (order > 3) continue;  // the oracle recounts the text on every call
    std::set<std::string> words;
    for (const auto &s : corpus) words.insert(s.begin(), s.end());
    KnOracle oracle(corpus, order, d, words);
    std::vector<std::string> cand(words.begin(), words.end());
    cand.push_back("</s>");
    cand.push_back("<unk>");
    for (int q = 0; q < 30; ++q) {
      std::vector<std::string> h;
      const int hl = rng.Index(order);
      for (int i = 0; i < hl; ++i) h.push_back(cand[rng.Index(cand.size() - 2)]);
      if (hl > 0 && rng.Bernoulli(0.3)) h[0] = "<s>";
      const std::string w = cand[rng.Index(cand.size())];
      CHECK(std::pow(10, lm.LogProb(w, h)) ==
            doctest::Approx(oracle.Prob(w, h)).epsilon(1e-10));
    }
  }
}

TEST_CASE("kneser-ney limits and backoff") {
  TextCorpus base{{"x", "y", "z"}, {"y", "z"}, {"x", "y"}};
  TextCorpus twice = base;
  twice.insert(twice.end(), base.begin(), base.end());
  auto counts = CountNGrams(twice, 2);
  auto lm = EstimateKneserNey(counts, {{1e-6}});
  // every count >= 2: top order approaches maximum likelihood
  for (const auto &[ng, c] : counts.tables[1]) {
    double ch = 0;
    for (const auto &[ng2, c2] : counts.tables[1])
      if (ng2[0] == ng[0]) ch += c2;
    CHECK(std::abs(std::pow(10, lm.LogProb(ng[1], {ng[0]})) - c / ch) < 1e-4);
  }
  // unseen history backs off fully
  auto tri = EstimateKneserNey(CountNGrams(base, 3));
  for (const std::string w : {"x", "y", "z", "</s>"})
    CHECK(tri.LogProb(w, {"z", "x"}) == doctest::Approx(tri.LogProb(w, {"x"})).epsilon(1e-14));
  CHECK_THROWS_AS(EstimateKneserNey(CountNGrams({}, 2)), AsrError);
  try {
    EstimateKneserNey(CountNGrams({}, 2));
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kEmptyCounts);
  }
  CHECK_THROWS_AS(EstimateKneserNey(counts, {{1.0}}), AsrError);
}

TEST_CASE("lm_logprob and unknown words") {
  Vocabulary v({"a", "b", "c"});
  auto uni = NGramModel::Uniform(v);
  CHECK(uni.LogProb("a", {"b"}) == doctest::Approx(std::log10(1.0 / 5)).epsilon(1e-15));
  CHECK(uni.LogProb("nope", {}) == uni.LogProb("<unk>", {}));

  TextCorpus corpus{{"a", "b", "c"}, {"a", "d"}};
  auto lm = EstimateKneserNey(CountNGrams(corpus, 3));
  CHECK(lm.LogProb("qq", {"a"}) == lm.LogProb("<unk>", {"a"}));
  // singleton words b, c, d of 5 tokens give <unk> at least 3/5 unigram mass
  CHECK(std::pow(10, lm.LogProb("<unk>", {})) >= 0.6);
  CHECK(std::isfinite(lm.LogProb("<unk>", {"<s>", "a"})));
}

TEST_CASE("evaluate") {
  TextCorpus one{{"a", "b"}};
  auto lm = EstimateKneserNey(CountNGrams(one, 2));
  TextCorpus rep{{"a", "b"}, {"a", "b"}, {"a", "b"}};
  auto r = EvaluateLm(lm, rep);
  const double lp = lm.LogProb("a", {"<s>"}) + lm.LogProb("b", {"a"}) + lm.LogProb("</s>", {"b"});
  CHECK(r.perplexity == doctest::Approx(std::pow(10.0, -lp / 3)).epsilon(1e-12));
  CHECK(r.num_predictions == 9);
  CHECK(r.oov_rate == 0.0);

  auto oov = EvaluateLm(lm, {{"p", "q"}, {"r"}});
  CHECK(oov.oov_rate == 1.0);
  CHECK(oov.num_oov == 3);

  Vocabulary v({"a", "b", "c", "d"});
  auto uni = EvaluateLm(NGramModel::Uniform(v), {{"a", "c", "zz"}, {"d"}});
  CHECK(uni.perplexity == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(r.perplexity >= 1.0);

  try {
    EvaluateLm(lm, {});
    FAIL("expected EmptyText");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kEmptyText);
  }
}

TEST_CASE("interpolation and weight tuning") {
  Rng rng(5);
  TextCorpus ca, cb;
  for (int i = 0; i < 40; ++i) {
    ca.push_back({"the", "cat", rng.Bernoulli(0.5) ? "sat" : "ran"});
    cb.push_back({"a", "dog", rng.Bernoulli(0.5) ? "barked" : "ran"});
  }
  TextCorpus all = ca;
  all.insert(all.end(), cb.begin(), cb.end());
  Vocabulary shared = Vocabulary::FromCorpus(all);
  auto ma = std::make_shared<const NGramModel>(EstimateKneserNey(CountNGrams(ca, 3), {}, &shared));
  auto mb = std::make_shared<const NGramModel>(EstimateKneserNey(CountNGrams(cb, 3), {}, &shared));

  MixtureLm only_a = Interpolate({ma, mb}, {1.0, 0.0});
  for (const auto &h : ma->Histories())
    for (int w = 1; w < shared.Size(); ++w)
      CHECK(only_a.LogProb(w, h) == doctest::Approx(ma->LogProb(w, h)).epsilon(1e-13));

  MixtureLm mix = Interpolate({ma, mb}, {0.3, 0.7});
  for (const auto &h : mb->Histories()) CHECK(std::abs(SumOverVocab(mix, h) - 1.0) < 1e-9);

  TextCorpus dev;
  for (int i = 0; i < 10; ++i) dev.push_back({"the", "cat", "sat"});
  auto tuned = TuneWeights({ma, mb}, dev);
  CHECK(tuned.weights[0] > tuned.weights[1]);
  CHECK(tuned.weights[0] + tuned.weights[1] == doctest::Approx(1.0).epsilon(1e-12));
  for (std::size_t i = 1; i < tuned.log10_likelihood.size(); ++i)
    CHECK(tuned.log10_likelihood[i] >= tuned.log10_likelihood[i - 1] - 1e-12);

  CHECK_THROWS_AS(Interpolate({ma}, {1.0}), AsrError);
  CHECK_THROWS_AS(Interpolate({ma, mb}, {0.5, 0.6}), AsrError);
  auto other = std::make_shared<const NGramModel>(EstimateKneserNey(CountNGrams(ca, 3)));
  CHECK_THROWS_AS(Interpolate({ma, other}, {0.5, 0.5}), AsrError);

  // zero probability under every model
  NGramModel z1 = NGramModel::Uniform(shared), z2 = NGramModel::Uniform(shared);
  const int cat = shared.Id("cat");
  z1.MutableTable(1)[{cat}].log_prob = -std::numeric_limits<double>::infinity();
  z2.MutableTable(1)[{cat}].log_prob = -std::numeric_limits<double>::infinity();
  try {
    TuneWeights({std::make_shared<const NGramModel>(z1), std::make_shared<const NGramModel>(z2)},
                dev);
    FAIL("expected DegenerateDev");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kDegenerateDev);
  }

  // static export of a mixture: normalized and exact on stored n-grams
  NGramModel flat = mix.ToNGramModel();
  for (const auto &h : flat.Histories()) CHECK(std::abs(SumOverVocab(flat, h) - 1.0) < 1e-9);
  for (int n = 1; n <= 3; ++n)
    for (const auto &[key, e] : flat.GetTable(n)) {
      if (key.size() == 1 && key[0] == Vocabulary::kBos) continue;
      std::vector<int> h(key.begin(), key.end() - 1);
      CHECK(flat.LogProb(key.back(), h) == doctest::Approx(mix.LogProb(key.back(), h)).epsilon(1e-12));
    }
}

TEST_CASE("arpa round trip") {
  Rng rng(9);
  TextCorpus corpus = RandomCorpus(rng, 20, 6, 6);
  auto lm = EstimateKneserNey(CountNGrams(corpus, 4));
  std::stringstream ss;
  WriteArpa(ss, lm);
  CHECK(ss.str().find("\\data\\") != std::string::npos);
  CHECK(ss.str().find("\\4-grams:") != std::string::npos);
  NGramModel back = ReadArpa(ss);
  CHECK(back.Order() == 4);
  CHECK(back.Vocab() == lm.Vocab());
  for (const auto &h : lm.Histories())
    for (int w = 1; w < lm.Vocab().Size(); ++w)
      CHECK(back.LogProb(w, h) == lm.LogProb(w, h));
  std::stringstream bad("\\data\\\nngram 1=2\n\n\\1-grams:\n-1\ta\n\\end\\\n");
  CHECK_THROWS_AS(ReadArpa(bad), AsrError);
}

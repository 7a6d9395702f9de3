// tests/unit/hmm-test.cc

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
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "hmm-oracle.h"

#include "base/asr-error.h"
#include "base/math-utils.h"
#include "base/rand.h"
#include "hmm/acoustic-model.h"
#include "hmm/baum-welch.h"
#include "hmm/cart.h"
#include "hmm/diag-gmm.h"
#include "hmm/state-graph.h"

using namespace asrlab;

namespace {

HmmTopology RandomTopology(Rng &rng, int classes) {
  HmmTopology topo;
  topo.states_per_phone = classes;
  for (int c = 0; c < classes; ++c) {
    double p[3], sum = 0;
    for (double &x : p) sum += (x = 0.05 + rng.Uniform());
    topo.log_probs.push_back({std::log(p[0] / sum), std::log(p[1] / sum), std::log(p[2] / sum)});
  }
  return topo;
}

StateGraph RandomChain(int num_states, const HmmTopology &topo) {
  std::vector<GraphState> states;
  for (int s = 0; s < num_states; ++s)
    states.push_back({s, s % topo.NumClasses(), {0, 0, 0, s}});
  return StateGraph::LinearChain(states, topo);
}

Matrix RandomScores(Rng &rng, std::size_t T, std::size_t E) {
  Matrix m(T, E);
  for (double &v : m.Data()) v = -3.0 * rng.Uniform() - 0.1;
  return m;
}

}  // namespace

TEST_CASE("gmm_log_density") {
  DiagGmm unit(std::vector<double>{0.0}, std::vector<double>{1.0});
  CHECK(GmmLogDensity(std::vector<double>{0.0}, unit) ==
        doctest::Approx(-0.5 * std::log(2 * std::numbers::pi)).epsilon(1e-14));
  CHECK(GmmLogDensity(std::vector<double>{0.0}, unit) == doctest::Approx(-0.9189385332));

  Matrix m(2, 2), v(2, 2, 1.5);
  m(0, 0) = m(1, 0) = 0.3;
  m(0, 1) = m(1, 1) = -1.0;
  DiagGmm twin({0.3, 0.7}, m, v);
  DiagGmm single(m.Row(0), v.Row(0));
  std::vector<double> x{0.7, 0.2};
  CHECK(twin.LogDensity(x) == doctest::Approx(single.LogDensity(x)).epsilon(1e-12));

  Rng rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t K = 3, D = 4;
    std::vector<double> w{0.2, 0.5, 0.3};
    Matrix mu(K, D), var(K, D);
    for (double &a : mu.Data()) a = rng.Gauss();
    for (double &a : var.Data()) a = 0.3 + rng.Uniform();
    DiagGmm g(w, mu, var);
    std::vector<double> pt(D);
    for (double &a : pt) a = rng.Gauss();
    double naive = 0.0;
    for (std::size_t k = 0; k < K; ++k) {
      double dens = w[k];
      for (std::size_t d = 0; d < D; ++d)
        dens *= std::exp(-0.5 * (pt[d] - mu(k, d)) * (pt[d] - mu(k, d)) / var(k, d)) /
                std::sqrt(2 * std::numbers::pi * var(k, d));
      naive += dens;
    }
    CHECK(std::exp(g.LogDensity(pt)) == doctest::Approx(naive).epsilon(1e-8));
  }
  CHECK_THROWS_AS(unit.LogDensity(std::vector<double>{1, 2}), AsrError);
}

TEST_CASE("forward matches path enumeration") {
  // single state, stay probability one
  HmmTopology stay = HmmTopology::FromProbs(1, 1.0, 0.0, 0.0);
  StateGraph one = StateGraph::LinearChain({{0, 0, {}}}, stay);
  Matrix s3(3, 1);
  s3(0, 0) = -1.0;
  s3(1, 0) = -2.0;
  s3(2, 0) = -0.5;
  CHECK(ForwardLogLikelihood(one, s3) == doctest::Approx(-3.5).epsilon(1e-14));

  Rng rng(17);
  HmmTopology topo = RandomTopology(rng, 3);
  StateGraph g = RandomChain(3, topo);
  Matrix sc = RandomScores(rng, 4, 3);
  auto en = oracle::EnumeratePaths(g, sc);
  CHECK(ForwardLogLikelihood(g, sc) ==
        doctest::Approx(std::log(en.total_prob)).epsilon(1e-10));

  // 4 states need at least 3 frames (0 -> 2 -> 3 or 0 -> 1 -> 3)
  StateGraph g4 = RandomChain(4, topo);
  CHECK_THROWS_AS(ForwardLogLikelihood(g4, RandomScores(rng, 2, 4)), AsrError);
  CHECK_NOTHROW(ForwardLogLikelihood(g4, RandomScores(rng, 3, 4)));
  try {
    ViterbiAlign(g4, RandomScores(rng, 2, 4));
    FAIL("expected NoPath");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kNoPath);
  }
}

TEST_CASE("posteriors and viterbi against enumeration, random models") {
  Rng rng(99);
  for (int trial = 0; trial < 60; ++trial) {
    const int S = 1 + rng.Index(4);
    const std::size_t T = 1 + rng.Index(6);
    HmmTopology topo = RandomTopology(rng, 1 + rng.Index(3));
    StateGraph g = RandomChain(S, topo);
    Matrix sc = RandomScores(rng, T, S);
    auto en = oracle::EnumeratePaths(g, sc);
    if (en.num_paths == 0) {
      CHECK_THROWS_AS(ForwardLogLikelihood(g, sc), AsrError);
      continue;
    }
    const double ll = std::log(en.total_prob);
    CHECK(std::abs(ForwardLogLikelihood(g, sc) - ll) <= 1e-10 * std::abs(ll) + 1e-12);
    Matrix post = ForwardBackwardPosteriors(g, sc);
    for (std::size_t t = 0; t < T; ++t) {
      double row = 0.0;
      for (int s = 0; s < S; ++s) {
        CHECK(std::abs(post(t, s) - en.occupancy(t, s) / en.total_prob) < 1e-9);
        CHECK(post(t, s) >= 0.0);
        row += post(t, s);
      }
      CHECK(std::abs(row - 1.0) < 1e-9);
    }
    Alignment ali = ViterbiAlign(g, sc);
    CHECK(ali.states == en.best_states);
    CHECK(ali.log_prob == doctest::Approx(en.best_log).epsilon(1e-12));
    CHECK(ali.log_prob <= ForwardLogLikelihood(g, sc) + 1e-12);
    for (std::size_t t = 1; t < T; ++t) {
      const int step = ali.states[t] - ali.states[t - 1];
      CHECK(step >= 0);
      CHECK(step <= 2);
    }
  }
}

TEST_CASE("single-state posteriors are one") {
  HmmTopology stay = HmmTopology::FromProbs(1, 1.0, 0.0, 0.0);
  StateGraph one = StateGraph::LinearChain({{0, 0, {}}}, stay);
  Rng rng(1);
  Matrix post = ForwardBackwardPosteriors(one, RandomScores(rng, 5, 1));
  for (double p : post.Data()) CHECK(p == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("viterbi identity alignment for T == S without skips") {
  HmmTopology topo = HmmTopology::FromProbs(1, 0.5, 0.5, 0.0);
  std::vector<GraphState> states;
  for (int s = 0; s < 5; ++s) states.push_back({s, 0, {}});
  StateGraph g = StateGraph::LinearChain(states, topo);
  Rng rng(4);
  Alignment ali = ViterbiAlign(g, RandomScores(rng, 5, 5));
  CHECK(ali.states == std::vector<int>{0, 1, 2, 3, 4});
}

TEST_CASE("linear_alignment") {
  CHECK(LinearAlignment(6, {1, 2, 3}) == std::vector<int>{1, 1, 2, 2, 3, 3});
  CHECK(LinearAlignment(7, {1, 2, 3}) == std::vector<int>{1, 1, 1, 2, 2, 3, 3});
  CHECK(LinearAlignment(3, {1, 2, 3}) == std::vector<int>{1, 2, 3});
  CHECK_THROWS_AS(LinearAlignment(2, {1, 2, 3}), AsrError);
}

TEST_CASE("posterior_to_scaled_likelihood") {
  Matrix uni(3, 4, 0.25);
  std::vector<double> prior(4, 0.25);
  const Matrix flat = PosteriorToScaledLikelihood(uni, prior);
  for (double v : flat.Data()) CHECK(v == 0.0);

  std::vector<double> p2{0.1, 0.2, 0.3, 0.4};
  Matrix rows(2, 4);
  for (int s = 0; s < 4; ++s) rows(0, s) = p2[s];
  rows(1, 0) = 0.7;
  rows(1, 1) = 0.1;
  rows(1, 2) = 0.15;
  rows(1, 3) = 0.05;
  Matrix sc = PosteriorToScaledLikelihood(rows, p2);
  for (int s = 0; s < 4; ++s) {
    CHECK(std::abs(sc(0, s)) < 1e-15);
    CHECK(sc(1, s) == doctest::Approx(std::log(rows(1, s) / p2[s])).epsilon(1e-12));
  }
  std::vector<double> bad{0.5, 0.5, 0.0, 0.0};
  try {
    PosteriorToScaledLikelihood(uni, bad);
    FAIL("expected ZeroPrior");
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kZeroPrior);
  }
  auto pri = EstimateStatePriors({{0, 0, 1}, {2}}, 3);
  CHECK(pri[0] == doctest::Approx(0.5));
  CHECK(pri[1] == doctest::Approx(0.25));
}

namespace {

TrainingUtterance ChainUtterance(const std::string &id, const FeatureMatrix &feats,
                                 int num_states) {
  std::vector<GraphState> states;
  for (int s = 0; s < num_states; ++s) states.push_back({0, s % 3, {0, s / 3, 0, s % 3}});
  TrainingUtterance u{id, feats, StateGraph::LinearChain(states, HmmTopology::Uniform012())};
  return u;
}

}  // namespace

TEST_CASE("baum_welch recovers a known single Gaussian") {
  Rng rng(21);
  const std::vector<double> mu{1.5, -0.5}, var{2.0, 0.5};
  FeatureMatrix feats;
  feats.frames.Resize(2000, 2);
  for (std::size_t t = 0; t < 2000; ++t)
    for (int d = 0; d < 2; ++d) feats.frames(t, d) = mu[d] + std::sqrt(var[d]) * rng.Gauss();
  HmmTopology topo = HmmTopology::FromProbs(1, 0.9, 0.1, 0.0);
  std::vector<TrainingUtterance> corpus{
      {"u", feats, StateGraph::LinearChain({{0, 0, {}}}, topo)}};
  PhoneSet phones({"sil"}, "sil");
  CartTree tree = CartTree::Monophone(1, 1);
  AcousticModel init;
  init.phones = phones;
  init.topology = topo;
  init.tree = tree;
  init.emissions.assign(1, DiagGmm(std::vector<double>{0.0, 0.0}, std::vector<double>{1.0, 1.0}));

  BaumWelchOptions opts;
  opts.iterations = 0;
  auto same = BaumWelchTrain(corpus, init, opts);
  CHECK(same.model.emissions[0].Means() == init.emissions[0].Means());
  CHECK(same.log_likelihood.empty());

  opts.iterations = 3;
  auto res = BaumWelchTrain(corpus, init, opts);
  const auto &g = res.model.emissions[0];
  for (int d = 0; d < 2; ++d) {
    CHECK(std::abs(g.Means()(0, d) - mu[d]) < 0.05);
    CHECK(std::abs(g.Vars()(0, d) - var[d]) < 0.1);
  }
  g.Validate(kDefaultVarFloor);
}

TEST_CASE("baum_welch log-likelihood is monotone") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    Rng rng(seed);
    // 2 phones x 3 states, data drawn per state with distinct means
    std::vector<TrainingUtterance> corpus;
    for (int u = 0; u < 8; ++u) {
      FeatureMatrix f;
      f.frames.Resize(0, 0);
      for (int s = 0; s < 6; ++s) {
        const int dur = 2 + rng.Index(4);
        for (int k = 0; k < dur; ++k) {
          std::vector<double> x{s * 1.0 + 0.5 * rng.Gauss(), (s % 2) * 2.0 + 0.5 * rng.Gauss()};
          f.frames.AppendRow(x);
        }
      }
      corpus.push_back(ChainUtterance("u" + std::to_string(u), f, 6));
    }
    PhoneSet phones({"sil", "a", "b"}, "sil");
    HmmTopology topo = HmmTopology::FromProbs(3, 0.5, 0.4, 0.1);
    CartTree tree = CartTree::Monophone(3, 3);
    AcousticModel init = InitializeFromLinearAlignment(corpus, phones, topo, tree, 1e-3);
    BaumWelchOptions opts;
    opts.iterations = 10;
    auto res = BaumWelchTrain(corpus, init, opts);
    REQUIRE(res.log_likelihood.size() == 10);
    for (std::size_t i = 1; i < res.log_likelihood.size(); ++i)
      CHECK(res.log_likelihood[i] >= res.log_likelihood[i - 1] - 1e-8);
    for (const auto &g : res.model.emissions) g.Validate(1e-3);
    res.model.topology.Validate();

    // with mixture growth the curve stays monotone between splits and the
    // mixtures reach the target
    opts.target_components = 3;
    auto grown = BaumWelchTrain(corpus, init, opts);
    for (const auto &g : grown.model.emissions) {
      CHECK(g.NumComponents() == 3);
      g.Validate(1e-3);
    }
    for (std::size_t i = 1; i < grown.log_likelihood.size(); ++i)
      if (i % 2 == 1) CHECK(grown.log_likelihood[i] >= grown.log_likelihood[i - 1] - 1e-8);
  }
}

TEST_CASE("baum_welch skips utterances without a path") {
  FeatureMatrix tiny;
  tiny.frames = Matrix(1, 1, 0.5);
  FeatureMatrix ok;
  ok.frames = Matrix(6, 1, 0.5);
  ok.frames(0, 0) = 0.1;
  std::vector<TrainingUtterance> corpus{ChainUtterance("short", tiny, 6),
                                        ChainUtterance("ok", ok, 6)};
  PhoneSet phones({"sil", "a", "b"}, "sil");
  AcousticModel init;
  init.phones = phones;
  init.topology = HmmTopology::Uniform012();
  init.tree = CartTree::Monophone(3, 3);
  init.emissions.assign(9, DiagGmm(std::vector<double>{0.0}, std::vector<double>{1.0}));
  BaumWelchOptions opts;
  opts.iterations = 1;
  auto res = BaumWelchTrain(corpus, init, opts);
  CHECK(res.skipped_utterances == 1);
}

TEST_CASE("split heaviest") {
  DiagGmm g({0.3, 0.7}, Matrix(2, 1, 0.0), Matrix(2, 1, 4.0));
  g.SplitHeaviest(0.1);
  CHECK(g.NumComponents() == 3);
  CHECK(g.Weights()[1] == doctest::Approx(0.35));
  CHECK(g.Weights()[2] == doctest::Approx(0.35));
  CHECK(g.Means()(1, 0) == doctest::Approx(0.2));
  CHECK(g.Means()(2, 0) == doctest::Approx(-0.2));
  g.Validate();
}

namespace {

CartStats MakeStats(ContextState ctx, double count, std::vector<double> mean, double var) {
  CartStats s{ctx, count, {}, {}};
  for (double m : mean) {
    s.sum.push_back(count * m);
    s.sumsq.push_back(count * (var + m * m));
  }
  return s;
}

// Independent cluster log-likelihood: pooled ML Gaussian evaluated per dim.
double OracleClusterLl(const std::vector<CartStats> &items) {
  double n = 0;
  std::vector<double> s(items[0].sum.size()), q(s.size());
  for (const auto &it : items) {
    n += it.count;
    for (std::size_t d = 0; d < s.size(); ++d) {
      s[d] += it.sum[d];
      q[d] += it.sumsq[d];
    }
  }
  double ll = 0;
  for (std::size_t d = 0; d < s.size(); ++d) {
    const double var = std::max(q[d] / n - (s[d] / n) * (s[d] / n), 1e-3);
    ll += -0.5 * n * (std::log(2 * std::numbers::pi * var) + 1.0);
  }
  return ll;
}

}  // namespace

TEST_CASE("cart_build") {
  const int num_phones = 4, sil = 0;
  std::vector<CartStats> stats;
  // center phone 1; left context 2 -> mean +3, left context 3 -> mean -3
  for (int right = 0; right < num_phones; ++right) {
    stats.push_back(MakeStats({2, 1, right, 0}, 20, {3.0, 0.1 * right}, 0.5));
    stats.push_back(MakeStats({3, 1, right, 0}, 20, {-3.0, 0.1 * right}, 0.5));
  }
  auto questions = DefaultQuestions(num_phones, sil, 3);
  CartOptions opts;
  opts.max_leaves = 1;
  CartTree single = BuildCart(stats, questions, opts);
  CHECK(single.NumLeaves() == 1);
  for (const auto &s : stats) CHECK(single.Leaf(s.context) == 0);

  opts.max_leaves = 2;
  CartTree two = BuildCart(stats, questions, opts);
  CHECK(two.NumLeaves() == 2);
  // hand oracle: gain of every question, the left=2/left=3 split must win
  double best_gain = -1e300;
  std::string best_name;
  for (const auto &q : questions) {
    std::vector<CartStats> yes, no;
    for (const auto &s : stats) (q.Matches(s.context) ? yes : no).push_back(s);
    if (yes.empty() || no.empty()) continue;
    const double gain = OracleClusterLl(yes) + OracleClusterLl(no) - OracleClusterLl(stats);
    if (gain > best_gain) {
      best_gain = gain;
      best_name = q.name;
    }
  }
  CHECK((best_name == "left=2" || best_name == "left=3"));
  const auto &root_q = two.Questions()[two.Nodes()[0].question];
  CHECK(root_q.key == ContextKey::kLeft);
  CHECK(two.Leaf({2, 1, 0, 0}) != two.Leaf({3, 1, 0, 0}));
  // unseen contexts still map to a leaf
  CHECK(two.Leaf({1, 3, 2, 2}) >= 0);

  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<CartStats> rs;
    for (int i = 0; i < 30; ++i)
      rs.push_back(MakeStats({rng.Index(num_phones), rng.Index(num_phones),
                              rng.Index(num_phones), rng.Index(3)},
                             1 + rng.Index(10), {rng.Gauss(), rng.Gauss()}, 0.2 + rng.Uniform()));
    CartOptions o;
    o.max_leaves = 1 + rng.Index(12);
    CartTree t = BuildCart(rs, questions, o);
    CHECK(t.NumLeaves() <= o.max_leaves);
    std::vector<int> used(t.NumLeaves(), 0);
    for (const auto &s : rs) {
      const int leaf = t.Leaf(s.context);
      CHECK(leaf >= 0);
      CHECK(leaf < t.NumLeaves());
      used[leaf] = 1;
    }
    for (int u : used) CHECK(u == 1);
  }

  CartTree mono = CartTree::Monophone(3, 3);
  CHECK(mono.NumLeaves() == 9);
  for (int p = 0; p < 3; ++p)
    for (int pos = 0; pos < 3; ++pos) CHECK(mono.Leaf({1, p, 2, pos}) == p * 3 + pos);
}

TEST_CASE("acoustic model checkpoint round trip") {
  AcousticModel m;
  m.phones = PhoneSet({"sil", "a"}, "sil");
  m.topology = HmmTopology::FromProbs(3, 0.6, 0.3, 0.1);
  m.tree = CartTree::Monophone(2, 3);
  Matrix mu(2, 2, 0.5), var(2, 2, 1.5);
  m.emissions.assign(6, DiagGmm({0.4, 0.6}, mu, var));
  std::stringstream ss;
  WriteAcousticModel(ss, m);
  AcousticModel back = ReadAcousticModel(ss);
  CHECK(back.tree.NumLeaves() == 6);
  CHECK(back.phones.Phones() == m.phones.Phones());
  CHECK(back.topology.log_probs == m.topology.log_probs);
  CHECK(back.emissions[3].Means() == mu);
  CHECK(back.emissions[3].Weights() == m.emissions[3].Weights());
}

// lm/lm-eval.cc

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

#include "lm/lm-eval.h"

#include <cmath>
#include <numeric>

#include "base/asr-error.h"

namespace asrlab {

namespace {

// Calls f(word_id, history) for every predicted token of the text.
template <typename F>
void ForEachPrediction(const Vocabulary &vocab, const TextCorpus &text, F &&f) {
  std::vector<int> hist;
  for (const auto &sent : text) {
    hist.assign(1, Vocabulary::kBos);
    for (const auto &w : sent) {
      const int id = vocab.Id(w);
      f(id, std::span<const int>(hist), !vocab.Contains(w));
      hist.push_back(id);
    }
    f(Vocabulary::kEos, std::span<const int>(hist), false);
  }
}

}  // namespace

LmEvalReport EvaluateLm(const LanguageModel &lm, const TextCorpus &text) {
  LmEvalReport r;
  for (const auto &s : text) r.num_words += s.size();
  if (r.num_words == 0) ThrowError(ErrorCode::kEmptyText, "evaluation text has no words");
  r.num_sentences = text.size();
  ForEachPrediction(lm.Vocab(), text, [&](int w, std::span<const int> h, bool oov) {
    r.log10_prob += lm.LogProb(w, h);
    ++r.num_predictions;
    if (oov) ++r.num_oov;
  });
  r.perplexity = std::pow(10.0, -r.log10_prob / r.num_predictions);
  r.oov_rate = static_cast<double>(r.num_oov) / r.num_words;
  return r;
}

MixtureLm::MixtureLm(std::vector<std::shared_ptr<const NGramModel>> models,
                     std::vector<double> weights)
    : models_(std::move(models)), weights_(std::move(weights)) {
  if (models_.size() < 2)
    ThrowError(ErrorCode::kInvalidArgument, "interpolation needs at least two models");
  if (weights_.size() != models_.size())
    ThrowError(ErrorCode::kInvalidArgument, "one weight per model required");
  double sum = 0.0;
  for (double w : weights_) {
    if (w < 0.0) ThrowError(ErrorCode::kInvalidArgument, "negative mixture weight");
    sum += w;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    ThrowError(ErrorCode::kInvalidArgument, "mixture weights sum to ", sum);
  for (const auto &m : models_) {
    if (!(m->Vocab() == models_[0]->Vocab()))
      ThrowError(ErrorCode::kInvalidArgument, "mixture components need a shared vocabulary");
    order_ = std::max(order_, m->Order());
  }
}

double MixtureLm::LogProb(int word, std::span<const int> history) const {
  double p = 0.0;
  for (std::size_t k = 0; k < models_.size(); ++k)
    if (weights_[k] > 0.0) p += weights_[k] * std::pow(10.0, models_[k]->LogProb(word, history));
  return std::log10(p);
}

NGramModel MixtureLm::ToNGramModel() const {
  NGramModel out(order_, Vocab());
  for (int n = 1; n <= order_; ++n) {
    auto &t = out.MutableTable(n);
    for (const auto &m : models_)
      if (n <= m->Order())
        for (const auto &[key, e] : m->GetTable(n)) t[key] = {};
    for (auto &[key, e] : t) {
      if (key.size() == 1 && key[0] == Vocabulary::kBos) {
        e.log_prob = -99.0;
        continue;
      }
      e.log_prob = LogProb(key.back(), std::span<const int>(key).first(key.size() - 1));
    }
    if (n == 1) continue;
    // backoff weights of the order n-1 histories
    std::map<NGramModel::Key, std::pair<double, double>> seen;  // mass here, mass below
    for (const auto &[key, e] : t) {
      NGramModel::Key h(key.begin(), key.end() - 1);
      auto &s = seen[h];
      s.first += std::pow(10.0, e.log_prob);
      s.second +=
          std::pow(10.0, out.LogProb(key.back(), std::span<const int>(h).subspan(1)));
    }
    auto &lower = out.MutableTable(n - 1);
    for (const auto &[h, s] : seen) {
      const double num = std::max(1.0 - s.first, 1e-300), den = std::max(1.0 - s.second, 1e-300);
      lower.at(h).log_bow = std::log10(num / den);
    }
  }
  return out;
}

MixtureLm Interpolate(std::vector<std::shared_ptr<const NGramModel>> models,
                      std::vector<double> weights) {
  return MixtureLm(std::move(models), std::move(weights));
}

WeightTuningResult TuneWeights(const std::vector<std::shared_ptr<const NGramModel>> &models,
                               const TextCorpus &dev, double tolerance, int max_iterations) {
  if (models.size() < 2)
    ThrowError(ErrorCode::kInvalidArgument, "weight tuning needs at least two models");
  const std::size_t K = models.size();
  // per-token component probabilities, computed once
  std::vector<std::vector<double>> probs;
  ForEachPrediction(models[0]->Vocab(), dev, [&](int w, std::span<const int> h, bool) {
    std::vector<double> p(K);
    double any = 0.0;
    for (std::size_t k = 0; k < K; ++k) any += p[k] = std::pow(10.0, models[k]->LogProb(w, h));
    if (!(any > 0.0)) ThrowError(ErrorCode::kDegenerateDev, "dev token with zero probability");
    probs.push_back(std::move(p));
  });
  if (probs.empty()) ThrowError(ErrorCode::kDegenerateDev, "empty dev text");

  WeightTuningResult res;
  res.weights.assign(K, 1.0 / K);
  auto log_likelihood = [&](const std::vector<double> &lam) {
    double ll = 0.0;
    for (const auto &p : probs) ll += std::log10(std::inner_product(p.begin(), p.end(), lam.begin(), 0.0));
    return ll;
  };
  double ll = log_likelihood(res.weights);
  res.log10_likelihood.push_back(ll);
  for (int it = 0; it < max_iterations; ++it) {
    std::vector<double> next(K, 0.0);
    for (const auto &p : probs) {
      const double mix = std::inner_product(p.begin(), p.end(), res.weights.begin(), 0.0);
      for (std::size_t k = 0; k < K; ++k) next[k] += res.weights[k] * p[k] / mix;
    }
    for (double &w : next) w /= probs.size();
    const double new_ll = log_likelihood(next);
    res.weights = next;
    res.log10_likelihood.push_back(new_ll);
    if (new_ll - ll < tolerance) break;
    ll = new_ll;
  }
  return res;
}

}  // namespace asrlab

// lm/lm-eval.h

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

#ifndef ASRLAB_LM_LM_EVAL_H_
#define ASRLAB_LM_LM_EVAL_H_

#include <memory>
#include <vector>

#include "lm/ngram-model.h"

namespace asrlab {

/// Perplexity is taken over every predicted token (words and </s>, OOV
/// words scored as <unk>); the OOV rate is over words only.
struct LmEvalReport {
  double perplexity = 0.0;
  double oov_rate = 0.0;
  double log10_prob = 0.0;
  long num_sentences = 0;
  long num_words = 0;
  long num_oov = 0;
  long num_predictions = 0;
};

/// Throws EmptyText if the text has no words.
LmEvalReport EvaluateLm(const LanguageModel &lm, const TextCorpus &text);

/// Linear mixture p(w|h) = sum_k w_k p_k(w|h) of models sharing one
/// vocabulary.
class MixtureLm : public LanguageModel {
 public:
  MixtureLm(std::vector<std::shared_ptr<const NGramModel>> models, std::vector<double> weights);

  int Order() const override { return order_; }
  const Vocabulary &Vocab() const override { return models_[0]->Vocab(); }
  using LanguageModel::LogProb;
  double LogProb(int word, std::span<const int> history) const override;

  const std::vector<double> &Weights() const { return weights_; }

  /// Static backoff approximation for ARPA export: exact on every n-gram
  /// stored in some component, renormalized backoff weights elsewhere.
  NGramModel ToNGramModel() const;

 private:
  std::vector<std::shared_ptr<const NGramModel>> models_;
  std::vector<double> weights_;
  int order_ = 0;
};

MixtureLm Interpolate(std::vector<std::shared_ptr<const NGramModel>> models,
                      std::vector<double> weights);

struct WeightTuningResult {
  std::vector<double> weights;
  std::vector<double> log10_likelihood;  // dev log-likelihood before each update, then final
};

/// EM over mixture weights, starting uniform, until the dev log-likelihood
/// improves by less than `tolerance`.  Throws DegenerateDev if some dev
/// token has zero probability under every model.
WeightTuningResult TuneWeights(const std::vector<std::shared_ptr<const NGramModel>> &models,
                               const TextCorpus &dev, double tolerance = 1e-6,
                               int max_iterations = 1000);

}  // namespace asrlab

#endif  // ASRLAB_LM_LM_EVAL_H_

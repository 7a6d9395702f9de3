// decoder/decoder.h

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

#ifndef ASRLAB_DECODER_DECODER_H_
#define ASRLAB_DECODER_DECODER_H_

#include <limits>
#include <string>
#include <vector>

#include "decoder/context-graph.h"
#include "feat/feature-matrix.h"
#include "lm/ngram-model.h"

namespace asrlab {

/// Search score = am_scale * (transition + emission log-likelihoods)
///              + lm_scale * ln p(w_1^N).
struct DecodeConfig {
  double am_scale = 1.0;
  double lm_scale = 1.0;
  double beam_logwidth = std::numeric_limits<double>::infinity();
  int max_active = 0;  // 0 = unlimited

  void Validate() const;
};

struct DecodeResult {
  std::vector<std::string> words;
  double log_score = 0.0;          // scaled search score, natural log
  double am_log_likelihood = 0.0;  // unscaled, natural log
  double lm_log10_prob = 0.0;      // including </s>
};

/// Time-synchronous Viterbi beam search over the lexicon word loop, with the
/// LM history (last order-1 words) as part of every hypothesis.  LM scores are
/// applied when a word is entered and </s> at the end; hypotheses must contain
/// at least one word.  Hypotheses that cannot reach a final state in the
/// remaining frames are dropped before beam pruning.
class Decoder {
 public:
  /// `model` supplies phones, topology and tree (emissions unused when
  /// decoding from a score matrix).  References must outlive the decoder.
  Decoder(const AcousticModel &model, const Lexicon &lexicon, const LanguageModel &lm,
          DecodeConfig cfg = {});

  /// `scores` is T x NumEmissions of emission log-likelihoods (or scaled
  /// likelihoods).  Throws NoHypothesis if every path was pruned or no word
  /// sequence fits.
  DecodeResult Decode(const Matrix &scores) const;
  /// GMM emission scores from `model`.
  DecodeResult Decode(const FeatureMatrix &feats) const;

  const ContextGraph &Graph() const { return graph_; }
  const DecodeConfig &Config() const { return cfg_; }

 private:
  const AcousticModel &model_;
  const LanguageModel &lm_;
  DecodeConfig cfg_;
  ContextGraph graph_;
  std::vector<std::string> words_;  // lexicon word id -> word
  std::vector<int> lm_ids_;         // lexicon word id -> LM vocabulary id
  std::vector<int> frames_to_final_;  // per graph state, frames still needed after this one
};

}  // namespace asrlab

#endif  // ASRLAB_DECODER_DECODER_H_

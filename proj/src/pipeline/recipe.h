// pipeline/recipe.h

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

#ifndef ASRLAB_PIPELINE_RECIPE_H_
#define ASRLAB_PIPELINE_RECIPE_H_

#include <map>
#include <string>
#include <vector>

#include "base/kv-config.h"
#include "decoder/decoder.h"
#include "decoder/lexicon.h"
#include "decoder/wer.h"
#include "feat/feature-mfcc.h"
#include "finetune/finetune.h"
#include "hmm/acoustic-model.h"
#include "lm/ngram-model.h"
#include "pipeline/manifest.h"
#include "ssl/pretrain.h"

namespace asrlab {

using FeatureSet = std::map<std::string, FeatureMatrix>;
/// Tied-state (tree leaf) id per frame.
using Alignments = std::map<std::string, std::vector<int>>;

MfccConfig MfccConfigFromKv(const KvConfig &kv);
KvConfig MfccConfigToKv(const MfccConfig &cfg);

/// MFCCs for entries with audio, stored features otherwise.
FeatureMatrix ComputeFeatures(const ManifestEntry &entry, const MfccConfig &cfg);

struct GmmConfig {
  int states_per_phone = 3;
  int mono_iterations = 6;
  int tri_iterations = 6;
  int max_leaves = 40;
  double min_leaf_count = 20.0;  // frames per CART leaf
  int components = 2;           // Gaussians per tied state
  double var_floor = 1e-3;

  void Validate() const;
  KvConfig ToKv() const;
  static GmmConfig FromKv(const KvConfig &kv);
};

struct GmmSystem {
  AcousticModel monophone;
  AcousticModel model;  // context-dependent, CART-tied
  std::vector<double> mono_log_likelihood;
  std::vector<double> tri_log_likelihood;
};

/// Monophone flat start from linear alignments and Baum-Welch, Viterbi
/// alignment, CART tree over the aligned triphone statistics, then
/// context-dependent Baum-Welch with mixture growth.
GmmSystem TrainGmmSystem(const FeatureSet &feats, const Transcripts &transcripts,
                         const Lexicon &lexicon, const PhoneSet &phones, const GmmConfig &cfg);

/// Forced alignment to the transcript; returns tied-state ids per frame.
Alignments AlignCorpus(const AcousticModel &model, const Lexicon &lexicon, const FeatureSet &feats,
                       const Transcripts &transcripts);

void WriteAlignments(const std::string &path, const Alignments &ali);
Alignments ReadAlignments(const std::string &path);

struct LmConfig {
  int order = 3;
  double discount = kDefaultKnDiscount;
  KvConfig ToKv() const;
  static LmConfig FromKv(const KvConfig &kv);
};

/// Kneser-Ney LM over the transcripts with the lexicon's words as vocabulary.
NGramModel TrainLm(const std::vector<std::vector<std::string>> &text, const Lexicon &lexicon,
                   const LmConfig &cfg);

struct DecodeSettings {
  DecodeConfig gmm{1.0, 10.0, 40.0, 0};
  DecodeConfig hybrid{1.0, 2.0, 20.0, 0};
  double prior_floor = 1e-5;
  KvConfig ToKv() const;
  static DecodeSettings FromKv(const KvConfig &kv);
};

Transcripts DecodeWithGmm(const AcousticModel &model, const Lexicon &lexicon,
                          const LanguageModel &lm, const FeatureSet &feats,
                          const std::vector<std::string> &ids, const DecodeConfig &cfg);

/// Scaled likelihoods log p(s|x) - log p(s) from the network, searched on
/// the GMM system's graph (phones, topology and tree).
Transcripts DecodeWithHybrid(const HybridModel &net, const std::vector<double> &priors,
                             const AcousticModel &graph_model, const Lexicon &lexicon,
                             const LanguageModel &lm,
                             const std::vector<FinetuneUtterance> &utts, const DecodeConfig &cfg);

/// Supervised data for the network: normalized waveform (if audio), features
/// and aligned labels (empty when `ali` lacks the id).
std::vector<FinetuneUtterance> MakeFinetuneData(const std::vector<const ManifestEntry *> &entries,
                                                const FeatureSet &feats, const Alignments &ali);

std::vector<AudioSegment> LoadAudio(const std::vector<const ManifestEntry *> &entries);

void WriteVector(const std::string &path, const std::vector<double> &v);
std::vector<double> ReadVector(const std::string &path);

}  // namespace asrlab

#endif  // ASRLAB_PIPELINE_RECIPE_H_

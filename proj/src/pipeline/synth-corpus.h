// pipeline/synth-corpus.h

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

#ifndef ASRLAB_PIPELINE_SYNTH_CORPUS_H_
#define ASRLAB_PIPELINE_SYNTH_CORPUS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "base/kv-config.h"
#include "decoder/lexicon.h"
#include "feat/feature-matrix.h"
#include "feat/wave.h"
#include "hmm/acoustic-model.h"

namespace asrlab {

enum class SynthMode { kFeatures, kWaveform };

struct SynthConfig {
  std::uint64_t seed = 1;
  int n_words = 5;
  int n_phones = 8;  // excluding silence
  int min_word_phones = 2;
  int max_word_phones = 4;
  int min_words = 1;  // per utterance
  int max_words = 3;
  int pretrain_utts = 0;
  int train_utts = 40;
  int dev_utts = 10;
  int test_utts = 10;
  int frames_per_phone = 8;
  int duration_jitter = 2;  // +- frames, uniform
  int silence_frames = 6;   // before and after each utterance
  double noise = 0.1;       // sigma of additive Gaussian noise
  SynthMode mode = SynthMode::kFeatures;
  int feature_dim = 13;         // feature mode
  double sample_rate = 8000.0;  // waveform mode
  double frame_shift_ms = 10.0;
  double frame_len_ms = 25.0;

  void Validate() const;
  KvConfig ToKv() const;
  static SynthConfig FromKv(const KvConfig &kv);
};

struct SynthUtterance {
  std::string id;
  std::string split;  // pretrain, train, dev or test
  std::vector<std::string> words;
  std::vector<int> frame_phones;  // phone id per frame (0 = silence)
  FeatureMatrix feats;            // feature mode
  AudioSegment audio;             // waveform mode
};

struct SynthCorpus {
  SynthConfig cfg;
  PhoneSet phones;  // "sil" first, then p1..pN
  Lexicon lexicon;
  /// Feature mode: one Gaussian mean per phone.  Waveform mode: the two
  /// tone frequencies (Hz) of each phone, silence empty.
  std::vector<std::vector<double>> prototypes;
  std::vector<SynthUtterance> utterances;
};

/// Deterministic for a given config.  Words get distinct random
/// pronunciations; utterances are random word sequences framed by silence,
/// each phone held for frames_per_phone +- jitter frames.
SynthCorpus SynthesizeCorpus(const SynthConfig &cfg);

/// Phone id of the nearest prototype for every frame (feature mode).
std::vector<int> NearestPrototype(const SynthCorpus &corpus, const Matrix &frames);

/// Writes audio/ or feats/, manifest.jsonl, lexicon.txt, phones.txt and
/// lm.txt (training transcripts) under `dir`; returns the manifest path.
std::string WriteSynthCorpus(const SynthCorpus &corpus, const std::string &dir);

}  // namespace asrlab

#endif  // ASRLAB_PIPELINE_SYNTH_CORPUS_H_

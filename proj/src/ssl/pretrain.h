// ssl/pretrain.h

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

#ifndef ASRLAB_SSL_PRETRAIN_H_
#define ASRLAB_SSL_PRETRAIN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "base/kv-config.h"
#include "feat/wave.h"
#include "nnet/optimizer.h"
#include "ssl/masking.h"
#include "ssl/wav2vec-model.h"

namespace asrlab::ssl {

struct PretrainConfig {
  EncoderConfig encoder = ToyConfig();
  MaskConfig mask;
  int distractors = 10;
  double kappa = 0.1;
  double diversity_weight = 0.1;
  /// Gumbel temperature, linear from start (epoch 1) to end (last epoch).
  double tau_start = 2.0;
  double tau_end = 0.5;
  int epochs = 20;
  int batch_utterances = 4;
  /// Rate per epoch (step = epoch - 1).
  nnet::LrSchedule schedule{5e-4};
  nnet::InitScheme init = nnet::InitScheme::kKaiming;
  /// Continue from this checkpoint (empty: random init).
  std::string init_checkpoint;
  /// Per-epoch checkpoints and log.csv go here (empty: nothing written).
  std::string out_dir;
  std::uint64_t seed = 1;

  KvConfig ToKv() const;
  /// Missing keys keep their defaults; "encoder.*" replaces the whole
  /// encoder config when present.
  static PretrainConfig FromKv(const KvConfig &kv);
};

/// Encoder config including dropout rates.
KvConfig EncoderConfigToKv(const EncoderConfig &cfg);
EncoderConfig EncoderConfigFromKv(const KvConfig &kv);

struct PretrainEpoch {
  int epoch = 0;  // 0: evaluation before any update
  double lr = 0.0;
  double tau = 0.0;
  double loss = 0.0;
  double contrastive = 0.0;
  double diversity = 0.0;
};

struct PretrainResult {
  std::vector<PretrainEpoch> log;
  std::vector<std::string> checkpoints;  // one per trained epoch
  std::string initial_checkpoint;        // epoch000, before any update
};

/// Random init, or matching-named tensors from cfg.init_checkpoint with the
/// rest random.
Wav2VecModel InitPretrainModel(const PretrainConfig &cfg);

struct LossTerms {
  Var total;
  double contrastive = 0.0;
  double diversity = 0.0;
  bool valid = false;  // false when fewer than 2 frames were masked
};

/// Contrastive + weight * diversity for one normalised waveform.
LossTerms PretrainLoss(const Wav2VecModel &m, const std::vector<double> &wave,
                       const PretrainConfig &cfg, double tau, Rng *rng, bool train);

PretrainResult Pretrain(const std::vector<AudioSegment> &corpus, const PretrainConfig &cfg,
                        Wav2VecModel *model);

void WritePretrainLog(const std::vector<PretrainEpoch> &log, const std::string &path);

}  // namespace asrlab::ssl

#endif  // ASRLAB_SSL_PRETRAIN_H_

// finetune/finetune.h

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

#ifndef ASRLAB_FINETUNE_FINETUNE_H_
#define ASRLAB_FINETUNE_FINETUNE_H_

#include <cstdint>
#include <string>
#include <vector>

#include "finetune/finetune-losses.h"
#include "finetune/hybrid-model.h"
#include "finetune/spec-augment.h"
#include "nnet/optimizer.h"

namespace asrlab {

struct OnOffSpec {
  /// Epochs trained without dropout, SpecAugment and intermediate loss
  /// before the schedule restarts with everything enabled.  0 disables.
  int off_epochs = 0;
};

struct FinetuneConfig {
  HybridConfig model;
  long batch_frames = 1875;
  /// Stepped once per epoch (step = epoch index within the stage).
  nnet::LrSchedule schedule{1e-5};
  bool specaugment = true;
  SpecAugmentConfig specaug;
  IntermediateLossSpec inter;
  double l2 = 0.0;
  OnOffSpec on_off;
  int epochs = 10;
  bool shuffle = true;
  double gradient_noise = 0.0;
  /// Restore the epoch with the best dev frame accuracy at the end.
  bool keep_best = true;
  nnet::InitScheme init = nnet::InitScheme::kGlorot;
  std::uint64_t seed = 1;
  std::string log_path;  // CSV, empty = none

  void Validate() const;
  KvConfig ToKv() const;
  /// Missing keys keep their defaults; "model.*" holds the HybridConfig.
  static FinetuneConfig FromKv(const KvConfig &kv);
};

struct FinetuneEpoch {
  int epoch = 0;
  std::string stage;  // "off" or "on"
  long schedule_step = 0;
  double lr = 0.0;
  double loss = 0.0;  // frame-weighted mean total
  double fce = 0.0;
  double inter = 0.0;
  double l2 = 0.0;
  double dev_accuracy = 0.0;
  std::int64_t masked_cells = 0;
  std::int64_t dropout_draws = 0;
};

struct FinetuneResult {
  std::vector<FinetuneEpoch> log;
  int best_epoch = 0;
  double best_dev_accuracy = 0.0;
};

/// Random initialization, then encoder weights from `encoder` if given.
HybridModel BuildFinetuneModel(const FinetuneConfig &cfg, const nnet::Checkpoint *encoder = nullptr);

/// Training-batch loss for a list of utterances: frame-weighted mean of
/// output and intermediate losses plus the L2 term.  `regularize` enables
/// dropout, SpecAugment, the intermediate loss and L2.
struct BatchLoss {
  LossBreakdown loss;
  std::int64_t frames = 0;
  std::int64_t masked_cells = 0;
};
BatchLoss ComputeBatchLoss(const HybridModel &m, const std::vector<const FinetuneUtterance *> &batch,
                           const FinetuneConfig &cfg, bool regularize, Rng *rng);

/// Fraction of frames whose argmax output matches the label.
double FrameAccuracy(const HybridModel &m, const std::vector<FinetuneUtterance> &utts);

/// `model` must match cfg.model (see BuildFinetuneModel).
FinetuneResult Finetune(const std::vector<FinetuneUtterance> &train,
                        const std::vector<FinetuneUtterance> &dev, const FinetuneConfig &cfg,
                        HybridModel *model);

void WriteFinetuneLog(const std::string &path, const std::vector<FinetuneEpoch> &log);

}  // namespace asrlab

#endif  // ASRLAB_FINETUNE_FINETUNE_H_

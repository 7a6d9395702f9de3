// pipeline/experiment.h

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

#ifndef ASRLAB_PIPELINE_EXPERIMENT_H_
#define ASRLAB_PIPELINE_EXPERIMENT_H_

#include <string>
#include <vector>

#include "base/kv-config.h"
#include "pipeline/report.h"
#include "pipeline/stage-runner.h"

namespace asrlab {

/// Built-in settings for the synthetic 8 kHz waveform corpus; a user config
/// is merged on top.
KvConfig DefaultExperimentConfig();

/// Sections: synth.* (or corpus.manifest/lexicon/phones/lm_text), features.*,
/// gmm.*, lm.*, pretrain.*, finetune.*, decode.*.  "systems" lists gmm,
/// scratch, pretrained and pretrained@<epoch>; "splits" the scored splits.
/// A top-level "seed" is the default for every section's seed.
std::vector<StageDef> BuildExperimentStages(const KvConfig &cfg);

/// Stage name used for a system ("pretrained@10" -> "...-pretrained-e10").
std::string SystemStageSuffix(const std::string &system);

struct ExperimentResult {
  std::vector<StageRecord> stages;
  WerReport report;
  std::string report_dir;  // holds report.txt and report.csv
};

/// Runs the stage graph under `cache_root`; when cfg has "output_dir" the
/// report files are copied there.
ExperimentResult RunExperiment(const KvConfig &cfg, const std::string &cache_root);

struct SweepRow {
  int pretrain_epoch = 0;
  WerBreakdown wer;  // on the first scored split
};

/// Fine-tunes and decodes from each pre-training checkpoint in `epochs`
/// (0 = before any update).
std::vector<SweepRow> RunCheckpointSweep(const KvConfig &cfg, const std::vector<int> &epochs,
                                         const std::string &cache_root);

/// pretrain_epoch,wer,substitutions,insertions,deletions,reference_words
std::string FormatSweepCsv(const std::vector<SweepRow> &rows);

}  // namespace asrlab

#endif  // ASRLAB_PIPELINE_EXPERIMENT_H_

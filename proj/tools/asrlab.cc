// tools/asrlab.cc

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

// Command-line front end: corpus synthesis, scoring and the cached
// experiment stages.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "base/asr-error.h"
#include "base/kv-config.h"
#include "decoder/wer.h"
#include "pipeline/experiment.h"
#include "pipeline/stage-runner.h"
#include "pipeline/synth-corpus.h"

using namespace asrlab;

namespace {

struct Globals {
  std::vector<std::string> config_files;
  std::vector<std::string> overrides;
  long seed = -1;
  std::string cache;
};

KvConfig LoadConfig(const Globals &g) {
  KvConfig cfg = DefaultExperimentConfig();
  for (const auto &f : g.config_files) cfg.Merge(KvConfig::ReadFile(f));
  for (const auto &o : g.overrides) cfg.Merge(KvConfig::ParseString(o));
  if (g.seed >= 0) cfg.Set("seed", g.seed);
  return cfg;
}

void PrintStages(const std::vector<StageRecord> &records) {
  for (const auto &r : records)
    std::printf("%-28s %-6s %8.2fs  %s\n", r.name.c_str(), r.cache_hit ? "cached" : "ran",
                r.seconds, r.dir.c_str());
}

std::string StageFor(const std::string &verb, const std::string &system) {
  if (verb == "finetune") return "finetune-" + SystemStageSuffix(system);
  if (verb == "decode") return "decode-" + SystemStageSuffix(system);
  if (verb == "train-gmm") return "gmm";
  return verb;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Hybrid HMM speech recognition toolkit"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("-c,--config", g.config_files, "Config file(s), key = value");
  app.add_option("-s,--set", g.overrides, "Override, e.g. finetune.epochs=5");
  app.add_option("--seed", g.seed, "Default seed for every stage");
  app.add_option("--cache", g.cache, "Stage cache directory (default $ASRLAB_CACHE or ./cache)");

  std::string out_dir;
  auto *synth = app.add_subcommand("synth", "Write a synthetic corpus");
  synth->add_option("-o,--out", out_dir, "Output directory")->required();

  std::string ref, hyp;
  auto *score = app.add_subcommand("score", "WER of a hypothesis file");
  score->add_option("--ref", ref, "Reference transcripts")->required();
  score->add_option("--hyp", hyp, "Hypothesis transcripts")->required();

  std::string system = "pretrained";
  std::vector<CLI::App *> stage_cmds;
  const std::vector<std::pair<std::string, std::string>> verbs = {
      {"features", "Compute features"},
      {"train-gmm", "Train the GMM-HMM system"},
      {"align", "Forced alignment and state priors"},
      {"lm", "Estimate the n-gram LM"},
      {"pretrain", "Self-supervised pre-training"},
      {"finetune", "Fine-tune a hybrid network"},
      {"decode", "Decode and score a system"}};
  for (const auto &[name, help] : verbs) {
    auto *cmd = app.add_subcommand(name, help);
    if (name == "finetune" || name == "decode")
      cmd->add_option("--system", system, "scratch, pretrained, pretrained@N or gmm");
    stage_cmds.push_back(cmd);
  }

  auto *run = app.add_subcommand("run", "Run the whole experiment and print the WER table");
  run->add_option("-o,--output", out_dir, "Copy report.txt/report.csv here");

  std::vector<int> epochs{0, 10, 20};
  std::string sweep_out;
  auto *sweep = app.add_subcommand("sweep", "Dev WER per pre-training checkpoint");
  sweep->add_option("--epochs", epochs, "Checkpoint epochs")->delimiter(',');
  sweep->add_option("-o,--out", sweep_out, "CSV output file");

  CLI11_PARSE(app, argc, argv);

  try {
    const KvConfig cfg = LoadConfig(g);
    const std::string cache = g.cache.empty() ? DefaultCacheRoot("cache") : g.cache;
    if (synth->parsed()) {
      KvConfig sc = cfg.Section("synth");
      if (!sc.Has("seed")) sc.Set("seed", cfg.GetString("seed"));
      std::cout << WriteSynthCorpus(SynthesizeCorpus(SynthConfig::FromKv(sc)), out_dir) << "\n";
    } else if (score->parsed()) {
      const WerBreakdown w = ScoreCorpus(ReadTranscripts(ref), ReadTranscripts(hyp));
      std::printf("%%WER %.2f [ %ld / %ld, %ld ins, %ld del, %ld sub ]\n", 100.0 * w.wer,
                  w.Errors(), w.reference_words, w.insertions,
                  w.deletions, w.substitutions);
    } else if (run->parsed()) {
      KvConfig rc = cfg;
      if (!out_dir.empty()) rc.Set("output_dir", out_dir);
      const ExperimentResult r = RunExperiment(rc, cache);
      PrintStages(r.stages);
      std::cout << "\n" << FormatWerTable(r.report);
    } else if (sweep->parsed()) {
      const std::string csv = FormatSweepCsv(RunCheckpointSweep(cfg, epochs, cache));
      if (!sweep_out.empty()) {
        std::ofstream os(sweep_out);
        os << csv;
        if (!os) ThrowError(ErrorCode::kIoError, "cannot write '", sweep_out, "'");
      }
      std::cout << csv;
    } else {
      for (auto *cmd : stage_cmds) {
        if (!cmd->parsed()) continue;
        KvConfig rc = cfg;
        if (cmd->get_name() == "finetune" || cmd->get_name() == "decode")
          rc.Set("systems", system);
        StageRunner runner(cache);
        PrintStages(runner.Run(
            SelectStages(BuildExperimentStages(rc), StageFor(cmd->get_name(), system))));
      }
    }
  } catch (const AsrError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

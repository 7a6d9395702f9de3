// pipeline/stage-runner.h

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

#ifndef ASRLAB_PIPELINE_STAGE_RUNNER_H_
#define ASRLAB_PIPELINE_STAGE_RUNNER_H_

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "base/kv-config.h"

namespace asrlab {

/// Hex SHA-256 of a byte string / of a file's contents.
std::string Sha256Hex(const std::string &data);
std::string Sha256File(const std::string &path);

struct StageContext {
  std::string name;
  std::string dir;                             // this stage's output directory
  std::map<std::string, std::string> inputs;   // dependency name -> its directory
  const KvConfig *config = nullptr;            // the stage's own config
};

struct StageDef {
  std::string name;
  std::vector<std::string> deps;
  /// Everything the stage reads besides its dependencies' outputs; part of
  /// the cache key.
  KvConfig config;
  std::function<void(const StageContext &)> run;
};

struct StageRecord {
  std::string name;
  std::string key;
  std::string dir;
  bool cache_hit = false;
  double seconds = 0.0;
};

/// Runs stages in dependency order with a content-addressed cache: a stage's
/// key hashes its name, config and its dependencies' keys, and its output
/// lives in <cache_root>/<name>-<key prefix>.  A stage is re-run when its
/// directory is not complete or when any dependency ran in this call.
class StageRunner {
 public:
  explicit StageRunner(std::string cache_root);

  /// Throws InvalidArgument for unknown dependencies, duplicates or cycles,
  /// StageFailure (stage name and cause) when a stage throws.  The failed
  /// stage's directory is removed.
  std::vector<StageRecord> Run(const std::vector<StageDef> &stages);

  /// Directory a stage would use, without running anything.
  std::map<std::string, std::string> PlanDirs(const std::vector<StageDef> &stages) const;

  const std::string &CacheRoot() const { return root_; }

  /// Marker written after a stage completes.
  static constexpr const char *kDoneMarker = ".complete";

 private:
  std::vector<int> Order(const std::vector<StageDef> &stages) const;
  std::map<std::string, std::string> Keys(const std::vector<StageDef> &stages,
                                          const std::vector<int> &order) const;
  std::string root_;
};

/// `target` and everything it depends on, in declaration order.  Throws
/// InvalidArgument for an unknown stage.
std::vector<StageDef> SelectStages(const std::vector<StageDef> &stages, const std::string &target);

/// Cache root from $ASRLAB_CACHE, else `fallback`.
std::string DefaultCacheRoot(const std::string &fallback);

}  // namespace asrlab

#endif  // ASRLAB_PIPELINE_STAGE_RUNNER_H_

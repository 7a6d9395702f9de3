// pipeline/stage-runner.cc

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

#include "pipeline/stage-runner.h"

#include <openssl/evp.h>

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <set>
#include <sstream>

#include "base/asr-error.h"

namespace asrlab {

namespace fs = std::filesystem;

namespace {

class Sha256 {
 public:
  Sha256() : ctx_(EVP_MD_CTX_new()) {
    if (!ctx_ || EVP_DigestInit_ex(ctx_, EVP_sha256(), nullptr) != 1)
      ThrowError(ErrorCode::kInvalidArgument, "SHA-256 unavailable");
  }
  ~Sha256() { EVP_MD_CTX_free(ctx_); }
  Sha256(const Sha256 &) = delete;
  Sha256 &operator=(const Sha256 &) = delete;

  void Update(const char *data, std::size_t n) { EVP_DigestUpdate(ctx_, data, n); }

  std::string HexDigest() {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    EVP_DigestFinal_ex(ctx_, md, &len);
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
    return os.str();
  }

 private:
  EVP_MD_CTX *ctx_;
};

}  // namespace

std::string Sha256Hex(const std::string &data) {
  Sha256 h;
  h.Update(data.data(), data.size());
  return h.HexDigest();
}

std::string Sha256File(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open ", path);
  Sha256 h;
  char buf[1 << 16];
  while (is) {
    is.read(buf, sizeof(buf));
    h.Update(buf, static_cast<std::size_t>(is.gcount()));
  }
  return h.HexDigest();
}

std::vector<StageDef> SelectStages(const std::vector<StageDef> &stages, const std::string &target) {
  std::map<std::string, const StageDef *> by_name;
  for (const auto &s : stages) by_name[s.name] = &s;
  if (!by_name.count(target)) ThrowError(ErrorCode::kInvalidArgument, "unknown stage ", target);
  std::set<std::string> keep;
  std::vector<std::string> todo{target};
  while (!todo.empty()) {
    const std::string name = todo.back();
    todo.pop_back();
    if (!keep.insert(name).second) continue;
    auto it = by_name.find(name);
    if (it == by_name.end()) ThrowError(ErrorCode::kInvalidArgument, "unknown stage ", name);
    for (const auto &d : it->second->deps) todo.push_back(d);
  }
  std::vector<StageDef> out;
  for (const auto &s : stages)
    if (keep.count(s.name)) out.push_back(s);
  return out;
}

std::string DefaultCacheRoot(const std::string &fallback) {
  const char *env = std::getenv("ASRLAB_CACHE");
  return env && *env ? std::string(env) : fallback;
}

StageRunner::StageRunner(std::string cache_root) : root_(std::move(cache_root)) {}

std::vector<int> StageRunner::Order(const std::vector<StageDef> &stages) const {
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < stages.size(); ++i)
    if (!index.emplace(stages[i].name, static_cast<int>(i)).second)
      ThrowError(ErrorCode::kInvalidArgument, "duplicate stage ", stages[i].name);
  for (const auto &s : stages)
    for (const auto &d : s.deps)
      if (!index.count(d)) ThrowError(ErrorCode::kInvalidArgument, "stage ", s.name, " needs unknown ", d);
  // Kahn's algorithm, ties broken by declaration order.
  std::vector<int> indeg(stages.size(), 0);
  for (std::size_t i = 0; i < stages.size(); ++i) indeg[i] = static_cast<int>(stages[i].deps.size());
  std::vector<int> order;
  std::vector<bool> done(stages.size(), false);
  while (order.size() < stages.size()) {
    int next = -1;
    for (std::size_t i = 0; i < stages.size() && next < 0; ++i)
      if (!done[i] && indeg[i] == 0) next = static_cast<int>(i);
    if (next < 0) ThrowError(ErrorCode::kInvalidArgument, "stage graph has a cycle");
    done[next] = true;
    order.push_back(next);
    for (std::size_t i = 0; i < stages.size(); ++i)
      for (const auto &d : stages[i].deps)
        if (d == stages[next].name) --indeg[i];
  }
  return order;
}

std::map<std::string, std::string> StageRunner::Keys(const std::vector<StageDef> &stages,
                                                     const std::vector<int> &order) const {
  std::map<std::string, std::string> keys;
  for (int i : order) {
    const StageDef &s = stages[i];
    std::string text = "stage " + s.name + "\n" + s.config.ToString();
    std::vector<std::string> deps = s.deps;
    std::sort(deps.begin(), deps.end());
    for (const auto &d : deps) text += "dep " + d + " " + keys.at(d) + "\n";
    keys[s.name] = Sha256Hex(text);
  }
  return keys;
}

std::map<std::string, std::string> StageRunner::PlanDirs(const std::vector<StageDef> &stages) const {
  const auto keys = Keys(stages, Order(stages));
  std::map<std::string, std::string> dirs;
  for (const auto &[name, key] : keys) dirs[name] = (fs::path(root_) / (name + "-" + key.substr(0, 16))).string();
  return dirs;
}

std::vector<StageRecord> StageRunner::Run(const std::vector<StageDef> &stages) {
  const std::vector<int> order = Order(stages);
  const auto keys = Keys(stages, order);
  const auto dirs = PlanDirs(stages);
  std::set<std::string> executed;
  std::vector<StageRecord> records;
  for (int i : order) {
    const StageDef &s = stages[i];
    StageRecord r;
    r.name = s.name;
    r.key = keys.at(s.name);
    r.dir = dirs.at(s.name);
    bool stale = !fs::exists(fs::path(r.dir) / kDoneMarker);
    for (const auto &d : s.deps) stale = stale || executed.count(d) > 0;
    if (!stale) {
      r.cache_hit = true;
      records.push_back(r);
      continue;
    }
    const auto t0 = std::chrono::steady_clock::now();
    fs::remove_all(r.dir);
    fs::create_directories(r.dir);
    StageContext ctx;
    ctx.name = s.name;
    ctx.dir = r.dir;
    ctx.config = &s.config;
    for (const auto &d : s.deps) ctx.inputs[d] = dirs.at(d);
    try {
      s.run(ctx);
    } catch (const std::exception &e) {
      fs::remove_all(r.dir);
      ThrowError(ErrorCode::kStageFailure, "stage '", s.name, "' failed: ", e.what());
    }
    std::ofstream((fs::path(r.dir) / kDoneMarker).string()) << r.key << "\n";
    executed.insert(s.name);
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    records.push_back(r);
  }
  return records;
}

}  // namespace asrlab

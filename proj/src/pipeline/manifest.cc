// pipeline/manifest.cc

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

#include "pipeline/manifest.h"

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "base/asr-error.h"
#include "json.hpp"

namespace asrlab {

namespace fs = std::filesystem;

bool IsKnownSplit(const std::string &split) {
  return split == "pretrain" || split == "train" || split == "dev" || split == "test";
}

void CorpusManifest::Validate() const {
  std::set<std::string> ids;
  for (const auto &e : entries) {
    if (e.id.empty()) ThrowError(ErrorCode::kFormatError, "manifest entry without id");
    if (!ids.insert(e.id).second) ThrowError(ErrorCode::kFormatError, "duplicate id ", e.id);
    if (!IsKnownSplit(e.split))
      ThrowError(ErrorCode::kFormatError, "utterance ", e.id, ": unknown split '", e.split, "'");
    if (e.split != "pretrain" && !e.transcript)
      ThrowError(ErrorCode::kFormatError, "utterance ", e.id, " (", e.split, ") has no transcript");
    if (e.audio.empty() && e.features.empty())
      ThrowError(ErrorCode::kFormatError, "utterance ", e.id, " has neither audio nor features");
  }
}

std::vector<const ManifestEntry *> CorpusManifest::Split(const std::string &split) const {
  std::vector<const ManifestEntry *> out;
  for (const auto &e : entries)
    if (e.split == split) out.push_back(&e);
  return out;
}

CorpusManifest ReadManifest(const std::string &path) {
  std::ifstream is(path);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open manifest ", path);
  const fs::path base = fs::path(path).parent_path();
  auto resolve = [&](const std::string &p) {
    if (p.empty() || fs::path(p).is_absolute()) return p;
    return (base / p).string();
  };
  CorpusManifest m;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception &ex) {
      ThrowError(ErrorCode::kFormatError, path, ":", lineno, ": ", ex.what());
    }
    if (!j.is_object() || !j.contains("id") || !j.contains("split"))
      ThrowError(ErrorCode::kFormatError, path, ":", lineno, ": need id and split");
    ManifestEntry e;
    try {
      e.id = j.at("id").get<std::string>();
      e.split = j.at("split").get<std::string>();
      e.audio = resolve(j.value("audio", std::string()));
      e.features = resolve(j.value("features", std::string()));
      if (j.contains("text")) {
        std::istringstream ws(j.at("text").get<std::string>());
        std::vector<std::string> words;
        for (std::string w; ws >> w;) words.push_back(w);
        e.transcript = words;
      }
    } catch (const nlohmann::json::exception &ex) {
      ThrowError(ErrorCode::kFormatError, path, ":", lineno, ": ", ex.what());
    }
    m.entries.push_back(std::move(e));
  }
  m.Validate();
  return m;
}

void WriteManifest(const std::string &path, const CorpusManifest &manifest) {
  manifest.Validate();
  std::ofstream os(path);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write manifest ", path);
  for (const auto &e : manifest.entries) {
    nlohmann::ordered_json j;
    j["id"] = e.id;
    j["split"] = e.split;
    if (!e.audio.empty()) j["audio"] = e.audio;
    if (!e.features.empty()) j["features"] = e.features;
    if (e.transcript) {
      std::string text;
      for (std::size_t i = 0; i < e.transcript->size(); ++i) text += (i ? " " : "") + (*e.transcript)[i];
      j["text"] = text;
    }
    os << j.dump() << "\n";
  }
}

}  // namespace asrlab

// pipeline/manifest.h

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

#ifndef ASRLAB_PIPELINE_MANIFEST_H_
#define ASRLAB_PIPELINE_MANIFEST_H_

#include <optional>
#include <string>
#include <vector>

namespace asrlab {

struct ManifestEntry {
  std::string id;
  std::string split;  // pretrain, train, dev, test
  std::string audio;     // path, may be empty
  std::string features;  // path, may be empty
  std::optional<std::vector<std::string>> transcript;
};

/// One JSON object per line: {"id", "split", "audio"?, "features"?, "text"?}.
/// Relative paths are resolved against the manifest's directory on read.
struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  /// Ids unique, known splits, transcripts for train/dev/test, a source
  /// path for every entry.  Throws FormatError.
  void Validate() const;
  std::vector<const ManifestEntry *> Split(const std::string &split) const;
};

CorpusManifest ReadManifest(const std::string &path);
/// Paths are written as given.
void WriteManifest(const std::string &path, const CorpusManifest &manifest);

bool IsKnownSplit(const std::string &split);

}  // namespace asrlab

#endif  // ASRLAB_PIPELINE_MANIFEST_H_

// feat/feature-matrix.cc

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

#include "feat/feature-matrix.h"

#include <cstdint>
#include <fstream>
#include <iomanip>

#include "base/binary-io.h"

namespace asrlab {

void WriteFeatures(std::ostream &os, const FeatureMatrix &feats) {
  os.write("FEAT", 4);
  WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(feats.NumFrames()));
  WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(feats.Dim()));
  for (double v : feats.frames.Data()) WritePod<float>(os, static_cast<float>(v));
}

FeatureMatrix ReadFeatures(std::istream &is) {
  ExpectMagic(is, "FEAT");
  const auto rows = ReadPod<std::uint32_t>(is);
  const auto cols = ReadPod<std::uint32_t>(is);
  FeatureMatrix feats;
  feats.frames.Resize(rows, cols);
  for (double &v : feats.frames.Data()) v = ReadPod<float>(is);
  return feats;
}

void WriteFeaturesFile(const std::string &path, const FeatureMatrix &feats) {
  std::ofstream os(path, std::ios::binary);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  WriteFeatures(os, feats);
}

FeatureMatrix ReadFeaturesFile(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open ", path);
  return ReadFeatures(is);
}

void WriteFeaturesCsv(std::ostream &os, const FeatureMatrix &feats) {
  os << std::setprecision(9);
  for (std::size_t t = 0; t < feats.NumFrames(); ++t) {
    auto row = feats.frames.Row(t);
    for (std::size_t d = 0; d < row.size(); ++d) os << (d ? "," : "") << row[d];
    os << '\n';
  }
}

}  // namespace asrlab

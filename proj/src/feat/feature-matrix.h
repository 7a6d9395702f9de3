// feat/feature-matrix.h

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

#ifndef ASRLAB_FEAT_FEATURE_MATRIX_H_
#define ASRLAB_FEAT_FEATURE_MATRIX_H_

#include <iosfwd>
#include <string>

#include "base/matrix.h"

namespace asrlab {

/// T x D frame-level features.
struct FeatureMatrix {
  Matrix frames;
  double frame_shift_ms = 10.0;
  double frame_len_ms = 25.0;

  std::size_t NumFrames() const { return frames.NumRows(); }
  std::size_t Dim() const { return frames.NumCols(); }
};

// Binary container: "FEAT", u32 T, u32 D, then T*D float32 values row-major,
// little-endian.  Frame timing is not stored.
void WriteFeatures(std::ostream &os, const FeatureMatrix &feats);
FeatureMatrix ReadFeatures(std::istream &is);
void WriteFeaturesFile(const std::string &path, const FeatureMatrix &feats);
FeatureMatrix ReadFeaturesFile(const std::string &path);

/// One frame per line, comma separated, for debugging.
void WriteFeaturesCsv(std::ostream &os, const FeatureMatrix &feats);

}  // namespace asrlab

#endif  // ASRLAB_FEAT_FEATURE_MATRIX_H_

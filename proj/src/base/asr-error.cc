// base/asr-error.cc

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

#include "base/asr-error.h"

namespace asrlab {

const char *ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kConstantSignal: return "ConstantSignal";
    case ErrorCode::kEmptyAudio: return "EmptyAudio";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNoPath: return "NoPath";
    case ErrorCode::kTooShort: return "TooShort";
    case ErrorCode::kZeroPrior: return "ZeroPrior";
    case ErrorCode::kEmptyCounts: return "EmptyCounts";
    case ErrorCode::kEmptyText: return "EmptyText";
    case ErrorCode::kDegenerateDev: return "DegenerateDev";
    case ErrorCode::kMissingWord: return "MissingWord";
    case ErrorCode::kNoHypothesis: return "NoHypothesis";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kIdMismatch: return "IdMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kOddStride: return "OddStride";
    case ErrorCode::kDegenerateVector: return "DegenerateVector";
    case ErrorCode::kCheckpointShapeMismatch: return "CheckpointShapeMismatch";
    case ErrorCode::kTooFewBlocks: return "TooFewBlocks";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kLayerOutOfRange: return "LayerOutOfRange";
    case ErrorCode::kStageFailure: return "StageFailure";
  }
  return "Unknown";
}

}  // namespace asrlab

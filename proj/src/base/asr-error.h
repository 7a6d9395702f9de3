// base/asr-error.h

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

#ifndef ASRLAB_BASE_ASR_ERROR_H_
#define ASRLAB_BASE_ASR_ERROR_H_

#include <sstream>
#include <stdexcept>
#include <string>

namespace asrlab {

enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kFormatError,
  kConstantSignal,
  kEmptyAudio,
  kDimensionMismatch,
  kNoPath,
  kTooShort,
  kZeroPrior,
  kEmptyCounts,
  kEmptyText,
  kDegenerateDev,
  kMissingWord,
  kNoHypothesis,
  kEmptyReference,
  kIdMismatch,
  kShapeMismatch,
  kOddStride,
  kDegenerateVector,
  kCheckpointShapeMismatch,
  kTooFewBlocks,
  kLengthMismatch,
  kLayerOutOfRange,
  kStageFailure,
};

const char *ErrorCodeName(ErrorCode code);

class AsrError : public std::runtime_error {
 public:
  AsrError(ErrorCode code, const std::string &what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

// Streams its arguments into the message and throws AsrError.
template <typename... Args>
[[noreturn]] void ThrowError(ErrorCode code, const Args &...args) {
  std::ostringstream os;
  (os << ... << args);
  throw AsrError(code, os.str());
}

#define ASR_ASSERT(cond)                                                  \
  do {                                                                    \
    if (!(cond))                                                          \
      ::asrlab::ThrowError(::asrlab::ErrorCode::kInvalidArgument,         \
                           "assertion failed: " #cond " at ", __FILE__,   \
                           ":", __LINE__);                                \
  } while (0)

}  // namespace asrlab

#endif  // ASRLAB_BASE_ASR_ERROR_H_

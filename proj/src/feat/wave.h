// feat/wave.h

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

#ifndef ASRLAB_FEAT_WAVE_H_
#define ASRLAB_FEAT_WAVE_H_

#include <string>
#include <vector>

namespace asrlab {

struct AudioSegment {
  std::vector<double> samples;
  double sample_rate = 16000.0;
  std::string id;

  double DurationSeconds() const { return samples.size() / sample_rate; }
};

/// Throws InvalidArgument if the rate is not positive or a sample is not
/// finite.
void ValidateAudio(const AudioSegment &seg);

struct NormalizedAudio {
  AudioSegment audio;
  bool constant_signal = false;  // input variance below 1e-30; audio is zeros
};

/// Zero mean, unit variance (population variance).  Empty input throws
/// EmptyAudio.  A constant input yields zeros with constant_signal set.
NormalizedAudio NormalizeWaveform(const AudioSegment &seg);

/// 16-bit PCM mono RIFF/WAVE.  Samples are scaled to [-1, 1).
AudioSegment ReadWave(const std::string &path);
void WriteWave(const std::string &path, const AudioSegment &seg);

}  // namespace asrlab

#endif  // ASRLAB_FEAT_WAVE_H_

// feat/wave.cc

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

#include "feat/wave.h"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "base/asr-error.h"
#include "base/binary-io.h"

namespace asrlab {

void ValidateAudio(const AudioSegment &seg) {
  if (!(seg.sample_rate > 0))
    ThrowError(ErrorCode::kInvalidArgument, "sample rate must be positive");
  for (double s : seg.samples)
    if (!std::isfinite(s))
      ThrowError(ErrorCode::kInvalidArgument, "non-finite sample in ", seg.id);
}

NormalizedAudio NormalizeWaveform(const AudioSegment &seg) {
  if (seg.samples.empty())
    ThrowError(ErrorCode::kEmptyAudio, "cannot normalize empty segment ", seg.id);
  const double n = static_cast<double>(seg.samples.size());
  double mean = 0.0;
  for (double s : seg.samples) mean += s;
  mean /= n;
  double var = 0.0;
  for (double s : seg.samples) var += (s - mean) * (s - mean);
  var /= n;

  NormalizedAudio out;
  out.audio = seg;
  if (var < 1e-30) {
    std::fill(out.audio.samples.begin(), out.audio.samples.end(), 0.0);
    out.constant_signal = true;
    return out;
  }
  const double inv_std = 1.0 / std::sqrt(var);
  for (double &s : out.audio.samples) s = (s - mean) * inv_std;
  return out;
}

namespace {

std::uint32_t ReadU32(std::istream &is) { return ReadPod<std::uint32_t>(is); }
std::uint16_t ReadU16(std::istream &is) { return ReadPod<std::uint16_t>(is); }

}  // namespace

AudioSegment ReadWave(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open ", path);
  ExpectMagic(is, "RIFF");
  ReadU32(is);
  ExpectMagic(is, "WAVE");

  std::uint16_t channels = 0, bits = 0;
  std::uint32_t rate = 0;
  bool have_fmt = false;
  AudioSegment seg;
  seg.id = path;
  while (true) {
    char tag[4];
    is.read(tag, 4);
    if (!is) ThrowError(ErrorCode::kFormatError, "no data chunk in ", path);
    const std::uint32_t size = ReadU32(is);
    if (std::memcmp(tag, "fmt ", 4) == 0) {
      const std::uint16_t format = ReadU16(is);
      channels = ReadU16(is);
      rate = ReadU32(is);
      ReadU32(is);  // byte rate
      ReadU16(is);  // block align
      bits = ReadU16(is);
      if (size > 16) is.ignore(size - 16);
      if (format != 1 || channels != 1 || bits != 16)
        ThrowError(ErrorCode::kFormatError, path,
                   ": only 16-bit PCM mono is supported");
      have_fmt = true;
    } else if (std::memcmp(tag, "data", 4) == 0) {
      if (!have_fmt) ThrowError(ErrorCode::kFormatError, "data before fmt in ", path);
      const std::size_t n = size / 2;
      seg.samples.resize(n);
      for (std::size_t i = 0; i < n; ++i)
        seg.samples[i] = ReadPod<std::int16_t>(is) / 32768.0;
      break;
    } else {
      is.ignore(size + (size & 1));
    }
  }
  seg.sample_rate = rate;
  return seg;
}

void WriteWave(const std::string &path, const AudioSegment &seg) {
  std::ofstream os(path, std::ios::binary);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  const auto rate = static_cast<std::uint32_t>(std::lround(seg.sample_rate));
  const auto data_bytes = static_cast<std::uint32_t>(seg.samples.size() * 2);
  os.write("RIFF", 4);
  WritePod<std::uint32_t>(os, 36 + data_bytes);
  os.write("WAVEfmt ", 8);
  WritePod<std::uint32_t>(os, 16);
  WritePod<std::uint16_t>(os, 1);
  WritePod<std::uint16_t>(os, 1);
  WritePod<std::uint32_t>(os, rate);
  WritePod<std::uint32_t>(os, rate * 2);
  WritePod<std::uint16_t>(os, 2);
  WritePod<std::uint16_t>(os, 16);
  os.write("data", 4);
  WritePod<std::uint32_t>(os, data_bytes);
  for (double s : seg.samples) {
    const double scaled = std::clamp(std::round(s * 32768.0), -32768.0, 32767.0);
    WritePod<std::int16_t>(os, static_cast<std::int16_t>(scaled));
  }
}

}  // namespace asrlab

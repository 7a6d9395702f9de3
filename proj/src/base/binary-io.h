// base/binary-io.h

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

#ifndef ASRLAB_BASE_BINARY_IO_H_
#define ASRLAB_BASE_BINARY_IO_H_

#include <bit>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <string>

#include "base/asr-error.h"

namespace asrlab {

// All containers are little-endian on disk; the host is assumed little-endian
// (checked at compile time).
static_assert(std::endian::native == std::endian::little,
              "binary containers assume a little-endian host");

template <typename T>
void WritePod(std::ostream &os, T value) {
  os.write(reinterpret_cast<const char *>(&value), sizeof(T));
}

template <typename T>
T ReadPod(std::istream &is) {
  T value{};
  is.read(reinterpret_cast<char *>(&value), sizeof(T));
  if (!is) ThrowError(ErrorCode::kFormatError, "unexpected end of stream");
  return value;
}

inline void WriteString(std::ostream &os, const std::string &s) {
  WritePod<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string ReadString(std::istream &is) {
  const auto n = ReadPod<std::uint32_t>(is);
  std::string s(n, '\0');
  is.read(s.data(), n);
  if (!is) ThrowError(ErrorCode::kFormatError, "truncated string");
  return s;
}

inline void ExpectMagic(std::istream &is, const char *magic) {
  char buf[4];
  is.read(buf, 4);
  if (!is || std::memcmp(buf, magic, 4) != 0)
    ThrowError(ErrorCode::kFormatError, "bad magic, expected ", magic);
}

}  // namespace asrlab

#endif  // ASRLAB_BASE_BINARY_IO_H_

// base/kv-config.h

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

#ifndef ASRLAB_BASE_KV_CONFIG_H_
#define ASRLAB_BASE_KV_CONFIG_H_

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace asrlab {

/// Flat "key = value" configuration.  Lines starting with '#' and blank
/// lines are ignored; later keys override earlier ones.  Keys are kept
/// sorted so Write() is canonical.
class KvConfig {
 public:
  KvConfig() = default;
  explicit KvConfig(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  static KvConfig Parse(std::istream &is);
  static KvConfig ParseString(const std::string &text);
  static KvConfig ReadFile(const std::string &path);
  void Write(std::ostream &os) const;
  void WriteFile(const std::string &path) const;
  std::string ToString() const;

  bool Has(const std::string &key) const { return values_.count(key) > 0; }
  void Set(const std::string &key, const std::string &value) { values_[key] = value; }
  void Set(const std::string &key, double value);
  void Set(const std::string &key, long value);
  void Set(const std::string &key, int value) { Set(key, static_cast<long>(value)); }
  void Set(const std::string &key, bool value) { Set(key, std::string(value ? "true" : "false")); }
  void Set(const std::string &key, const char *value) { Set(key, std::string(value)); }

  /// Throws FormatError when missing or malformed.
  std::string GetString(const std::string &key) const;
  double GetDouble(const std::string &key) const;
  long GetInt(const std::string &key) const;
  bool GetBool(const std::string &key) const;
  std::vector<int> GetIntList(const std::string &key) const;  // comma separated
  std::vector<std::string> GetStringList(const std::string &key) const;

  std::string GetString(const std::string &key, const std::string &def) const;
  double GetDouble(const std::string &key, double def) const;
  long GetInt(const std::string &key, long def) const;
  bool GetBool(const std::string &key, bool def) const;

  /// Entries under "prefix." with the prefix removed.
  KvConfig Section(const std::string &prefix) const;
  /// Adds every entry of `other` as "prefix.key".
  void Merge(const KvConfig &other, const std::string &prefix = "");

  const std::map<std::string, std::string> &Values() const { return values_; }
  bool operator==(const KvConfig &other) const = default;

 private:
  std::map<std::string, std::string> values_;
};

/// Shortest decimal text that parses back to the same double.
std::string FormatDouble(double v);

}  // namespace asrlab

#endif  // ASRLAB_BASE_KV_CONFIG_H_

// base/kv-config.cc

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

#include "base/kv-config.h"

#include <charconv>
#include <fstream>
#include <sstream>

#include "base/asr-error.h"

namespace asrlab {

namespace {

std::string Trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string FormatDouble(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

KvConfig KvConfig::Parse(std::istream &is) {
  KvConfig c;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos)
      ThrowError(ErrorCode::kFormatError, "config line ", lineno, ": expected key = value");
    const std::string key = Trim(t.substr(0, eq));
    if (key.empty()) ThrowError(ErrorCode::kFormatError, "config line ", lineno, ": empty key");
    c.values_[key] = Trim(t.substr(eq + 1));
  }
  return c;
}

KvConfig KvConfig::ParseString(const std::string &text) {
  std::istringstream is(text);
  return Parse(is);
}

KvConfig KvConfig::ReadFile(const std::string &path) {
  std::ifstream is(path);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open config ", path);
  return Parse(is);
}

void KvConfig::Write(std::ostream &os) const {
  for (const auto &[k, v] : values_) os << k << " = " << v << "\n";
}

void KvConfig::WriteFile(const std::string &path) const {
  std::ofstream os(path);
  Write(os);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write '", path, "'");
}

std::string KvConfig::ToString() const {
  std::ostringstream os;
  Write(os);
  return os.str();
}

void KvConfig::Set(const std::string &key, double value) { values_[key] = FormatDouble(value); }

void KvConfig::Set(const std::string &key, long value) { values_[key] = std::to_string(value); }

std::string KvConfig::GetString(const std::string &key) const {
  auto it = values_.find(key);
  if (it == values_.end()) ThrowError(ErrorCode::kFormatError, "config key '", key, "' missing");
  return it->second;
}

double KvConfig::GetDouble(const std::string &key) const {
  const std::string v = GetString(key);
  double out = 0.0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    ThrowError(ErrorCode::kFormatError, "config key '", key, "': '", v, "' is not a number");
  return out;
}

long KvConfig::GetInt(const std::string &key) const {
  const std::string v = GetString(key);
  long out = 0;
  auto res = std::from_chars(v.data(), v.data() + v.size(), out);
  if (res.ec != std::errc() || res.ptr != v.data() + v.size())
    ThrowError(ErrorCode::kFormatError, "config key '", key, "': '", v, "' is not an integer");
  return out;
}

bool KvConfig::GetBool(const std::string &key) const {
  const std::string v = GetString(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  ThrowError(ErrorCode::kFormatError, "config key '", key, "': '", v, "' is not a boolean");
}

std::vector<int> KvConfig::GetIntList(const std::string &key) const {
  std::vector<int> out;
  std::stringstream ss(GetString(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (item.empty()) continue;
    KvConfig tmp;
    tmp.Set("x", item);
    out.push_back(static_cast<int>(tmp.GetInt("x")));
  }
  return out;
}

std::vector<std::string> KvConfig::GetStringList(const std::string &key) const {
  std::vector<std::string> out;
  std::stringstream ss(GetString(key));
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = Trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::string KvConfig::GetString(const std::string &key, const std::string &def) const {
  return Has(key) ? GetString(key) : def;
}
double KvConfig::GetDouble(const std::string &key, double def) const {
  return Has(key) ? GetDouble(key) : def;
}
long KvConfig::GetInt(const std::string &key, long def) const {
  return Has(key) ? GetInt(key) : def;
}
bool KvConfig::GetBool(const std::string &key, bool def) const {
  return Has(key) ? GetBool(key) : def;
}

KvConfig KvConfig::Section(const std::string &prefix) const {
  KvConfig out;
  const std::string p = prefix + ".";
  for (auto it = values_.lower_bound(p); it != values_.end(); ++it) {
    if (it->first.compare(0, p.size(), p) != 0) break;
    out.values_[it->first.substr(p.size())] = it->second;
  }
  return out;
}

void KvConfig::Merge(const KvConfig &other, const std::string &prefix) {
  for (const auto &[k, v] : other.values_) values_[prefix.empty() ? k : prefix + "." + k] = v;
}

}  // namespace asrlab

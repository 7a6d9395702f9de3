// nnet/checkpoint.cc

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

#include "nnet/checkpoint.h"

#include <fstream>

#include "base/binary-io.h"
#include "json.hpp"

namespace asrlab::nnet {

void Checkpoint::Put(const std::string &name, Tensor t) {
  if (!tensors.count(name)) names.push_back(name);
  tensors[name] = std::move(t);
}

const Tensor &Checkpoint::Get(const std::string &name) const {
  auto it = tensors.find(name);
  if (it == tensors.end()) ThrowError(ErrorCode::kInvalidArgument, "checkpoint has no '", name, "'");
  return it->second;
}

std::int64_t Checkpoint::NumParameters() const {
  std::int64_t n = 0;
  for (const auto &[name, t] : tensors) n += static_cast<std::int64_t>(t.Size());
  return n;
}

Checkpoint CheckpointFromStore(const ParameterStore &ps) {
  Checkpoint c;
  for (std::size_t i = 0; i < ps.Specs().size(); ++i)
    c.Put(ps.Specs()[i].name, ps.Values()[i]->value);
  return c;
}

void WriteCheckpoint(const Checkpoint &ckpt, const std::string &path) {
  nlohmann::json manifest;
  manifest["meta"] = ckpt.meta;
  manifest["tensors"] = nlohmann::json::array();
  for (const auto &name : ckpt.names)
    manifest["tensors"].push_back({{"name", name}, {"shape", ckpt.Get(name).Shape()}});
  std::ofstream os(path, std::ios::binary);
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write ", path);
  os.write("ACKP", 4);
  WriteString(os, manifest.dump());
  for (const auto &name : ckpt.names) {
    const Tensor &t = ckpt.Get(name);
    os.write(reinterpret_cast<const char *>(t.Data().data()),
             static_cast<std::streamsize>(t.Size() * sizeof(double)));
  }
  if (!os) ThrowError(ErrorCode::kIoError, "write failed for ", path);
}

Checkpoint ReadCheckpoint(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot open ", path);
  ExpectMagic(is, "ACKP");
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(ReadString(is));
  } catch (const nlohmann::json::exception &e) {
    ThrowError(ErrorCode::kFormatError, path, ": bad manifest: ", e.what());
  }
  Checkpoint c;
  try {
    c.meta = manifest.at("meta").get<std::map<std::string, std::string>>();
    for (const auto &entry : manifest.at("tensors")) {
      Tensor t(entry.at("shape").get<std::vector<int>>());
      is.read(reinterpret_cast<char *>(t.Data().data()),
              static_cast<std::streamsize>(t.Size() * sizeof(double)));
      if (!is) ThrowError(ErrorCode::kFormatError, path, ": truncated tensor data");
      c.Put(entry.at("name").get<std::string>(), std::move(t));
    }
  } catch (const nlohmann::json::exception &e) {
    ThrowError(ErrorCode::kFormatError, path, ": bad manifest: ", e.what());
  }
  return c;
}

LoadReport LoadParameters(const Checkpoint &ckpt, ParameterStore *ps,
                          const std::string &src_prefix, const std::string &dst_prefix) {
  LoadReport r;
  std::map<std::string, bool> touched;
  for (const auto &name : ckpt.names) {
    if (name.compare(0, src_prefix.size(), src_prefix) != 0) continue;
    const std::string target = dst_prefix + name.substr(src_prefix.size());
    Var v = ps->Find(target);
    if (!v) {
      ++r.unused;
      continue;
    }
    const Tensor &t = ckpt.Get(name);
    if (t.Shape() != v->value.Shape())
      ThrowError(ErrorCode::kCheckpointShapeMismatch, "'", name, "' has shape ", t.ShapeString(),
                 " but parameter '", target, "' is ", v->value.ShapeString());
    v->value = t;
    touched[target] = true;
    ++r.loaded;
  }
  for (const auto &s : ps->Specs())
    if (s.name.compare(0, dst_prefix.size(), dst_prefix) == 0 && !touched.count(s.name)) ++r.missing;
  return r;
}

}  // namespace asrlab::nnet

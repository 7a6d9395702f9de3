// nnet/checkpoint.h

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

#ifndef ASRLAB_NNET_CHECKPOINT_H_
#define ASRLAB_NNET_CHECKPOINT_H_

#include <map>
#include <string>
#include <vector>

#include "nnet/parameters.h"

namespace asrlab::nnet {

/// Ordered named tensors plus string metadata.  On disk: magic "ACKP", a
/// JSON manifest {"meta": {...}, "tensors": [{"name", "shape"}...]} and the
/// f64 data of each tensor in manifest order.
struct Checkpoint {
  std::vector<std::string> names;
  std::map<std::string, Tensor> tensors;
  std::map<std::string, std::string> meta;

  void Put(const std::string &name, Tensor t);
  bool Has(const std::string &name) const { return tensors.count(name) > 0; }
  const Tensor &Get(const std::string &name) const;
  std::int64_t NumParameters() const;
};

Checkpoint CheckpointFromStore(const ParameterStore &ps);
void WriteCheckpoint(const Checkpoint &ckpt, const std::string &path);
Checkpoint ReadCheckpoint(const std::string &path);

struct LoadReport {
  int loaded = 0;
  int missing = 0;  // store parameters absent from the checkpoint
  int unused = 0;   // checkpoint tensors without a matching parameter
};

/// Copies every checkpoint tensor whose name starts with `src_prefix` into
/// the store parameter named dst_prefix + suffix, when present.  Shape
/// differences throw CheckpointShapeMismatch.
LoadReport LoadParameters(const Checkpoint &ckpt, ParameterStore *ps,
                          const std::string &src_prefix = "", const std::string &dst_prefix = "");

}  // namespace asrlab::nnet

#endif  // ASRLAB_NNET_CHECKPOINT_H_

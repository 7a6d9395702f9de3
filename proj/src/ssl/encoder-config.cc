// ssl/encoder-config.cc

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

#include "ssl/encoder-config.h"

#include <sstream>

#include "base/asr-error.h"

namespace asrlab::ssl {

int EncoderConfig::TotalStride() const {
  int s = 1;
  for (const auto &b : conv) s *= b.stride;
  return s;
}

int EncoderConfig::ReceptiveField() const {
  int r = 1, jump = 1;
  for (const auto &b : conv) {
    r += (b.kernel - 1) * jump;
    jump *= b.stride;
  }
  return r;
}

int EncoderConfig::OutputLength(int samples) const {
  int t = samples;
  for (const auto &b : conv) {
    if (t < b.kernel) return 0;
    t = (t - b.kernel) / b.stride + 1;
  }
  return t;
}

void EncoderConfig::Validate() const {
  if (conv.empty()) ThrowError(ErrorCode::kInvalidArgument, "encoder needs conv blocks");
  for (const auto &b : conv)
    if (b.channels < 1 || b.kernel < 1 || b.stride < 1)
      ThrowError(ErrorCode::kInvalidArgument, "bad conv block (", b.channels, ",", b.kernel, ",",
                 b.stride, ")");
  if (model_dim < 1 || layers < 0 || heads < 1 || model_dim % heads != 0 || ff_dim < 1)
    ThrowError(ErrorCode::kInvalidArgument, "bad transformer dims");
  if (pos_conv_kernel < 1 || pos_conv_groups < 1 || model_dim % pos_conv_groups != 0)
    ThrowError(ErrorCode::kInvalidArgument, "bad positional conv");
  if (quantizer.groups < 1 || quantizer.entries < 2 || quantizer.dim % quantizer.groups != 0)
    ThrowError(ErrorCode::kInvalidArgument, "bad quantizer config");
  if (!(sample_rate > 0.0)) ThrowError(ErrorCode::kInvalidArgument, "bad sample rate");
}

std::map<std::string, std::string> EncoderConfig::ToMap() const {
  std::map<std::string, std::string> m;
  std::ostringstream conv_s;
  for (std::size_t i = 0; i < conv.size(); ++i)
    conv_s << (i ? ";" : "") << conv[i].channels << ',' << conv[i].kernel << ',' << conv[i].stride;
  m["name"] = name;
  m["sample_rate"] = std::to_string(sample_rate);
  m["conv"] = conv_s.str();
  m["model_dim"] = std::to_string(model_dim);
  m["layers"] = std::to_string(layers);
  m["heads"] = std::to_string(heads);
  m["ff_dim"] = std::to_string(ff_dim);
  m["pos_conv_kernel"] = std::to_string(pos_conv_kernel);
  m["pos_conv_groups"] = std::to_string(pos_conv_groups);
  m["quant_groups"] = std::to_string(quantizer.groups);
  m["quant_entries"] = std::to_string(quantizer.entries);
  m["quant_dim"] = std::to_string(quantizer.dim);
  m["quant_output_dim"] = std::to_string(quantizer.output_dim);
  m["final_dim"] = std::to_string(final_dim);
  return m;
}

EncoderConfig EncoderConfig::FromMap(const std::map<std::string, std::string> &m) {
  EncoderConfig c;
  try {
    c.name = m.at("name");
    c.sample_rate = std::stod(m.at("sample_rate"));
    c.conv.clear();
    std::stringstream ss(m.at("conv"));
    std::string block;
    while (std::getline(ss, block, ';')) {
      ConvBlockConfig b;
      char comma;
      std::istringstream bs(block);
      if (!(bs >> b.channels >> comma >> b.kernel >> comma >> b.stride))
        ThrowError(ErrorCode::kFormatError, "bad conv block '", block, "'");
      c.conv.push_back(b);
    }
    c.model_dim = std::stoi(m.at("model_dim"));
    c.layers = std::stoi(m.at("layers"));
    c.heads = std::stoi(m.at("heads"));
    c.ff_dim = std::stoi(m.at("ff_dim"));
    c.pos_conv_kernel = std::stoi(m.at("pos_conv_kernel"));
    c.pos_conv_groups = std::stoi(m.at("pos_conv_groups"));
    c.quantizer.groups = std::stoi(m.at("quant_groups"));
    c.quantizer.entries = std::stoi(m.at("quant_entries"));
    c.quantizer.dim = std::stoi(m.at("quant_dim"));
    c.quantizer.output_dim = std::stoi(m.at("quant_output_dim"));
    c.final_dim = std::stoi(m.at("final_dim"));
  } catch (const std::out_of_range &) {
    ThrowError(ErrorCode::kFormatError, "encoder config is missing a field");
  } catch (const std::invalid_argument &) {
    ThrowError(ErrorCode::kFormatError, "encoder config has a bad number");
  }
  c.Validate();
  return c;
}

namespace {

std::vector<ConvBlockConfig> StandardConv() {
  std::vector<ConvBlockConfig> conv{{512, 10, 5}};
  for (int i = 0; i < 4; ++i) conv.push_back({512, 3, 2});
  for (int i = 0; i < 2; ++i) conv.push_back({512, 2, 2});
  return conv;
}

}  // namespace

EncoderConfig BaseConfig() {
  EncoderConfig c;
  c.name = "base";
  c.sample_rate = 16000.0;
  c.conv = StandardConv();
  c.model_dim = 768;
  c.layers = 12;
  c.heads = 12;
  c.ff_dim = 3072;
  c.pos_conv_kernel = 128;
  c.pos_conv_groups = 16;
  c.quantizer = {2, 320, 256, 256};
  c.final_dim = 256;
  c.dropout_input = 0.1;
  c.dropout_encoder = 0.05;
  c.dropout_features = 0.1;
  return c;
}

EncoderConfig LargeConfig() {
  EncoderConfig c = BaseConfig();
  c.name = "large";
  c.model_dim = 1024;
  c.layers = 24;
  c.heads = 16;
  c.ff_dim = 4096;
  c.quantizer = {2, 320, 768, 768};
  c.final_dim = 768;
  c.dropout_input = c.dropout_encoder = c.dropout_features = 0.0;
  return c;
}

EncoderConfig Large8Config() {
  EncoderConfig c = LargeConfig();
  c.name = "large1-8";
  c.layers = 8;
  c.dropout_input = 0.1;
  c.dropout_encoder = 0.05;
  c.dropout_features = 0.1;
  return c;
}

EncoderConfig ToyConfig() {
  EncoderConfig c;
  c.name = "toy";
  c.sample_rate = 8000.0;
  c.conv = {{32, 10, 5}, {32, 8, 4}, {32, 4, 4}};
  c.model_dim = 32;
  c.layers = 2;
  c.heads = 4;
  c.ff_dim = 64;
  c.pos_conv_kernel = 8;
  c.pos_conv_groups = 2;
  c.quantizer = {2, 8, 16, 16};
  c.final_dim = 16;
  return c;
}

EncoderConfig HalveOneStride(const EncoderConfig &cfg, int layer) {
  EncoderConfig out = cfg;
  if (layer < 0) {
    for (std::size_t i = 0; i < cfg.conv.size(); ++i)
      if (cfg.conv[i].stride % 2 == 0) {
        layer = static_cast<int>(i);
        break;
      }
    if (layer < 0) ThrowError(ErrorCode::kOddStride, "no conv block has an even stride");
  }
  if (layer >= static_cast<int>(cfg.conv.size()))
    ThrowError(ErrorCode::kInvalidArgument, "conv block ", layer, " does not exist");
  if (cfg.conv[layer].stride % 2 != 0)
    ThrowError(ErrorCode::kOddStride, "conv block ", layer, " has odd stride ",
               cfg.conv[layer].stride);
  out.conv[layer].stride /= 2;
  out.sample_rate = cfg.sample_rate / 2.0;
  return out;
}

}  // namespace asrlab::ssl

// pipeline/synth-corpus.cc

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

#include "pipeline/synth-corpus.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

#include "base/asr-error.h"
#include "base/rand.h"
#include "pipeline/manifest.h"

namespace asrlab {

namespace fs = std::filesystem;

void SynthConfig::Validate() const {
  if (n_words < 2) ThrowError(ErrorCode::kInvalidArgument, "n_words must be >= 2");
  if (n_phones < 2) ThrowError(ErrorCode::kInvalidArgument, "n_phones must be >= 2");
  if (min_word_phones < 1 || max_word_phones < min_word_phones)
    ThrowError(ErrorCode::kInvalidArgument, "bad word length range");
  if (min_words < 1 || max_words < min_words)
    ThrowError(ErrorCode::kInvalidArgument, "bad words-per-utterance range");
  if (pretrain_utts < 0 || train_utts < 0 || dev_utts < 0 || test_utts < 0)
    ThrowError(ErrorCode::kInvalidArgument, "negative utterance count");
  if (frames_per_phone < 3 || duration_jitter < 0 || duration_jitter > frames_per_phone - 3)
    ThrowError(ErrorCode::kInvalidArgument, "phones need at least 3 frames");
  if (silence_frames < 0) ThrowError(ErrorCode::kInvalidArgument, "negative silence");
  if (noise < 0.0) ThrowError(ErrorCode::kInvalidArgument, "negative noise");
  if (feature_dim < 1) ThrowError(ErrorCode::kInvalidArgument, "feature_dim must be >= 1");
  if (sample_rate <= 0.0 || frame_shift_ms <= 0.0 || frame_len_ms < frame_shift_ms)
    ThrowError(ErrorCode::kInvalidArgument, "bad framing");
  // Distinct pronunciations must exist.
  double prons = 0.0;
  for (int l = min_word_phones; l <= max_word_phones; ++l) prons += std::pow(n_phones, l);
  if (prons < n_words) ThrowError(ErrorCode::kInvalidArgument, "too few phones for ", n_words, " words");
}

KvConfig SynthConfig::ToKv() const {
  KvConfig kv;
  kv.Set("seed", static_cast<long>(seed));
  kv.Set("n_words", n_words);
  kv.Set("n_phones", n_phones);
  kv.Set("min_word_phones", min_word_phones);
  kv.Set("max_word_phones", max_word_phones);
  kv.Set("min_words", min_words);
  kv.Set("max_words", max_words);
  kv.Set("pretrain_utts", pretrain_utts);
  kv.Set("train_utts", train_utts);
  kv.Set("dev_utts", dev_utts);
  kv.Set("test_utts", test_utts);
  kv.Set("frames_per_phone", frames_per_phone);
  kv.Set("duration_jitter", duration_jitter);
  kv.Set("silence_frames", silence_frames);
  kv.Set("noise", noise);
  kv.Set("mode", mode == SynthMode::kFeatures ? "features" : "waveform");
  kv.Set("feature_dim", feature_dim);
  kv.Set("sample_rate", sample_rate);
  kv.Set("frame_shift_ms", frame_shift_ms);
  kv.Set("frame_len_ms", frame_len_ms);
  return kv;
}

SynthConfig SynthConfig::FromKv(const KvConfig &kv) {
  SynthConfig c;
  c.seed = kv.GetInt("seed", static_cast<long>(c.seed));
  c.n_words = kv.GetInt("n_words", c.n_words);
  c.n_phones = kv.GetInt("n_phones", c.n_phones);
  c.min_word_phones = kv.GetInt("min_word_phones", c.min_word_phones);
  c.max_word_phones = kv.GetInt("max_word_phones", c.max_word_phones);
  c.min_words = kv.GetInt("min_words", c.min_words);
  c.max_words = kv.GetInt("max_words", c.max_words);
  c.pretrain_utts = kv.GetInt("pretrain_utts", c.pretrain_utts);
  c.train_utts = kv.GetInt("train_utts", c.train_utts);
  c.dev_utts = kv.GetInt("dev_utts", c.dev_utts);
  c.test_utts = kv.GetInt("test_utts", c.test_utts);
  c.frames_per_phone = kv.GetInt("frames_per_phone", c.frames_per_phone);
  c.duration_jitter = kv.GetInt("duration_jitter", c.duration_jitter);
  c.silence_frames = kv.GetInt("silence_frames", c.silence_frames);
  c.noise = kv.GetDouble("noise", c.noise);
  const std::string mode = kv.GetString("mode", "features");
  if (mode == "features") {
    c.mode = SynthMode::kFeatures;
  } else if (mode == "waveform") {
    c.mode = SynthMode::kWaveform;
  } else {
    ThrowError(ErrorCode::kFormatError, "unknown synth mode '", mode, "'");
  }
  c.feature_dim = kv.GetInt("feature_dim", c.feature_dim);
  c.sample_rate = kv.GetDouble("sample_rate", c.sample_rate);
  c.frame_shift_ms = kv.GetDouble("frame_shift_ms", c.frame_shift_ms);
  c.frame_len_ms = kv.GetDouble("frame_len_ms", c.frame_len_ms);
  c.Validate();
  return c;
}

namespace {

std::vector<double> Tones(int phone, const SynthConfig &cfg) {
  const double lo = 300.0, hi = std::min(3000.0, 0.4 * cfg.sample_rate);
  const double f1 = lo + (phone - 1) * (hi - lo) / std::max(cfg.n_phones - 1, 1);
  double f2 = 1.37 * f1;
  if (f2 > 0.45 * cfg.sample_rate) f2 = 0.63 * f1;
  return {f1, f2};
}

void RenderWaveform(const SynthCorpus &c, Rng &rng, SynthUtterance *u) {
  const SynthConfig &cfg = c.cfg;
  const int shift = static_cast<int>(std::lround(cfg.sample_rate * cfg.frame_shift_ms / 1000.0));
  const int len = static_cast<int>(std::lround(cfg.sample_rate * cfg.frame_len_ms / 1000.0));
  const int frames = static_cast<int>(u->frame_phones.size());
  const int n = frames * shift + (len - shift);
  u->audio.sample_rate = cfg.sample_rate;
  u->audio.id = u->id;
  u->audio.samples.assign(n, 0.0);
  const double two_pi = 2.0 * std::numbers::pi;
  int start = 0;
  while (start < n) {
    const int t = std::min(start / shift, frames - 1);
    const int phone = u->frame_phones[t];
    int end = start;
    while (end < n && u->frame_phones[std::min(end / shift, frames - 1)] == phone) ++end;
    if (phone != 0) {
      const auto &f = c.prototypes[phone];
      const double ph1 = two_pi * rng.Uniform(), ph2 = two_pi * rng.Uniform();
      for (int i = start; i < end; ++i) {
        const double s = static_cast<double>(i - start) / cfg.sample_rate;
        u->audio.samples[i] = 0.5 * std::sin(two_pi * f[0] * s + ph1) + 0.25 * std::sin(two_pi * f[1] * s + ph2);
      }
    }
    start = end;
  }
  for (double &s : u->audio.samples) s = std::clamp(s + cfg.noise * rng.Gauss(), -0.99, 0.99);
}

}  // namespace

SynthCorpus SynthesizeCorpus(const SynthConfig &cfg) {
  cfg.Validate();
  SynthCorpus c;
  c.cfg = cfg;
  Rng rng(cfg.seed);
  std::vector<std::string> names = {"sil"};
  for (int p = 1; p <= cfg.n_phones; ++p) names.push_back("p" + std::to_string(p));
  c.phones = PhoneSet(names, "sil");

  c.prototypes.assign(cfg.n_phones + 1, {});
  for (int p = 0; p <= cfg.n_phones; ++p) {
    if (cfg.mode == SynthMode::kFeatures) {
      c.prototypes[p].resize(cfg.feature_dim);
      for (double &v : c.prototypes[p]) v = 2.0 * rng.Gauss();
    } else if (p > 0) {
      c.prototypes[p] = Tones(p, cfg);
    }
  }

  std::set<std::vector<int>> seen;
  std::vector<std::vector<int>> prons;
  while (static_cast<int>(prons.size()) < cfg.n_words) {
    const int len = cfg.min_word_phones + rng.Index(cfg.max_word_phones - cfg.min_word_phones + 1);
    std::vector<int> pron(len);
    for (int &p : pron) p = 1 + rng.Index(cfg.n_phones);
    if (seen.insert(pron).second) prons.push_back(pron);
  }
  std::vector<std::string> words;
  for (int w = 0; w < cfg.n_words; ++w) {
    words.push_back("w" + std::to_string(w + 1));
    Pronunciation pron;
    for (int p : prons[w]) pron.push_back(names[p]);
    c.lexicon.Add(words.back(), pron);
  }

  const std::pair<const char *, int> splits[] = {
      {"pretrain", cfg.pretrain_utts}, {"train", cfg.train_utts}, {"dev", cfg.dev_utts}, {"test", cfg.test_utts}};
  for (const auto &[split, count] : splits) {
    for (int i = 0; i < count; ++i) {
      SynthUtterance u;
      std::ostringstream id;
      id << split << '_' << std::setw(4) << std::setfill('0') << i;
      u.id = id.str();
      u.split = split;
      u.frame_phones.assign(cfg.silence_frames, 0);
      const int nw = cfg.min_words + rng.Index(cfg.max_words - cfg.min_words + 1);
      for (int k = 0; k < nw; ++k) {
        const int w = rng.Index(cfg.n_words);
        u.words.push_back(words[w]);
        for (int p : prons[w]) {
          const int dur = cfg.frames_per_phone - cfg.duration_jitter + rng.Index(2 * cfg.duration_jitter + 1);
          u.frame_phones.insert(u.frame_phones.end(), dur, p);
        }
      }
      u.frame_phones.insert(u.frame_phones.end(), cfg.silence_frames, 0);
      if (cfg.mode == SynthMode::kFeatures) {
        u.feats.frame_shift_ms = cfg.frame_shift_ms;
        u.feats.frame_len_ms = cfg.frame_len_ms;
        u.feats.frames = Matrix(u.frame_phones.size(), cfg.feature_dim);
        for (std::size_t t = 0; t < u.frame_phones.size(); ++t)
          for (int d = 0; d < cfg.feature_dim; ++d)
            u.feats.frames(t, d) = c.prototypes[u.frame_phones[t]][d] + cfg.noise * rng.Gauss();
      } else {
        RenderWaveform(c, rng, &u);
      }
      c.utterances.push_back(std::move(u));
    }
  }
  return c;
}

std::vector<int> NearestPrototype(const SynthCorpus &corpus, const Matrix &frames) {
  if (corpus.cfg.mode != SynthMode::kFeatures)
    ThrowError(ErrorCode::kInvalidArgument, "nearest-prototype decoding needs feature mode");
  std::vector<int> out(frames.NumRows());
  for (std::size_t t = 0; t < frames.NumRows(); ++t) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p < corpus.prototypes.size(); ++p) {
      double d2 = 0.0;
      for (std::size_t d = 0; d < frames.NumCols(); ++d) {
        const double diff = frames(t, d) - corpus.prototypes[p][d];
        d2 += diff * diff;
      }
      if (d2 < best) {
        best = d2;
        out[t] = static_cast<int>(p);
      }
    }
  }
  return out;
}

std::string WriteSynthCorpus(const SynthCorpus &corpus, const std::string &dir) {
  const bool waveform = corpus.cfg.mode == SynthMode::kWaveform;
  const fs::path root(dir);
  fs::create_directories(root / (waveform ? "audio" : "feats"));
  CorpusManifest manifest;
  std::ofstream lm((root / "lm.txt").string());
  for (const auto &u : corpus.utterances) {
    ManifestEntry e;
    e.id = u.id;
    e.split = u.split;
    if (waveform) {
      e.audio = "audio/" + u.id + ".wav";
      WriteWave((root / e.audio).string(), u.audio);
    } else {
      e.features = "feats/" + u.id + ".feats";
      WriteFeaturesFile((root / e.features).string(), u.feats);
    }
    if (u.split != "pretrain") e.transcript = u.words;
    if (u.split == "train") {
      for (std::size_t i = 0; i < u.words.size(); ++i) lm << (i ? " " : "") << u.words[i];
      lm << "\n";
    }
    manifest.entries.push_back(std::move(e));
  }
  if (!lm) ThrowError(ErrorCode::kIoError, "cannot write ", (root / "lm.txt").string());
  WriteLexicon((root / "lexicon.txt").string(), corpus.lexicon);
  std::ofstream phones((root / "phones.txt").string());
  for (const auto &p : corpus.phones.Phones()) phones << p << "\n";
  const std::string path = (root / "manifest.jsonl").string();
  WriteManifest(path, manifest);
  return path;
}

}  // namespace asrlab

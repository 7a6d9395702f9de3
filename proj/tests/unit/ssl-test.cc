// tests/unit/ssl-test.cc

// Copyright 2026  asrlab authors

// See ../../../COPYING for clarification regarding multiple authors
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

#include <chrono>
#include <cmath>
#include <filesystem>
#include <numbers>

#include "doctest.h"

#include "base/asr-error.h"
#include "nnet/grad-check.h"
#include "ssl/augment.h"
#include "ssl/masking.h"
#include "ssl/pretrain.h"
#include "ssl/ssl-losses.h"
#include "ssl/wav2vec-model.h"

using namespace asrlab;
using namespace asrlab::ssl;
using namespace asrlab::nnet;

namespace {

Tensor RandomTensor(Rng &rng, std::vector<int> shape, double scale = 1.0) {
  Tensor t(std::move(shape));
  for (double &v : t.Data()) v = scale * rng.Gauss();
  return t;
}

// Alternating 0.1 s tones at two frequencies plus a little noise.
AudioSegment TwoPhoneUtterance(Rng &rng, double rate, int segments) {
  AudioSegment seg;
  seg.sample_rate = rate;
  const int per = static_cast<int>(0.1 * rate);
  const int first = rng.Index(2);
  for (int s = 0; s < segments; ++s) {
    const double f = (s + first) % 2 == 0 ? 300.0 : 1100.0;
    for (int i = 0; i < per; ++i)
      seg.samples.push_back(std::sin(2 * std::numbers::pi * f * i / rate) + 0.05 * rng.Gauss());
  }
  return seg;
}

EncoderConfig TinyConfig() {
  EncoderConfig c;
  c.name = "tiny";
  c.conv = {{4, 4, 2}, {4, 2, 2}};
  c.model_dim = 4;
  c.layers = 2;
  c.heads = 2;
  c.ff_dim = 6;
  c.pos_conv_kernel = 2;
  c.pos_conv_groups = 2;
  c.quantizer = {2, 3, 4, 3};
  c.final_dim = 3;
  return c;
}

int CountOnes(const std::vector<bool> &m) {
  int n = 0;
  for (bool b : m) n += b;
  return n;
}

}  // namespace

TEST_CASE("full-scale frame rate and receptive field") {
  const EncoderConfig base = BaseConfig();
  CHECK(base.TotalStride() == 320);
  CHECK(base.ReceptiveField() == 400);
  CHECK(base.FrameSeconds() == doctest::Approx(0.020));
  // 1 s at 16 kHz: 49 frames
  CHECK(base.OutputLength(16000) == 49);
  CHECK(base.OutputLength(399) == 0);

  const EncoderConfig half = HalveOneStride(base);
  CHECK(half.TotalStride() == 160);
  CHECK(half.sample_rate == 8000.0);
  CHECK(half.FrameSeconds() == base.FrameSeconds());
  CHECK_THROWS_AS(HalveOneStride(base, 0), AsrError);
  try {
    HalveOneStride(base, 0);
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kOddStride);
  }
  EncoderConfig toy2;
  toy2.conv = {{1, 4, 4}, {1, 2, 2}};
  const EncoderConfig t2 = HalveOneStride(toy2);
  CHECK(t2.conv[0].stride == 2);
  CHECK(t2.conv[1].stride == 2);
}

TEST_CASE("halving preserves frame counts on equal-duration audio") {
  // T = floor((N - R) / S) + 1.  Halving block j and the rate gives
  // 2 R' - R = receptive field of blocks 0..j, so the frame counts agree to
  // +-1 whenever that prefix field is at most S.
  Rng rng(1);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    EncoderConfig c;
    c.sample_rate = 16000;
    const int blocks = 2 + rng.Index(5);
    for (int b = 0; b < blocks; ++b) {
      const int s = 2 + rng.Index(4);
      c.conv.push_back({1, s + rng.Index(s + 1), s});
    }
    if (c.TotalStride() % 2 != 0) continue;
    const EncoderConfig h = HalveOneStride(c);
    int j = 0;
    while (c.conv[j].stride == h.conv[j].stride) ++j;
    EncoderConfig prefix = c;
    prefix.conv.resize(j + 1);
    CHECK(2 * h.ReceptiveField() - c.ReceptiveField() == prefix.ReceptiveField());
    CHECK(h.FrameSeconds() == doctest::Approx(c.FrameSeconds()));
    if (prefix.ReceptiveField() > c.TotalStride()) continue;
    ++checked;
    for (double secs : {0.5, 1.0, 2.3}) {
      const int full = c.OutputLength(static_cast<int>(secs * c.sample_rate));
      const int half = h.OutputLength(static_cast<int>(secs * h.sample_rate));
      CHECK(std::abs(full - half) <= 1);
    }
  }
  CHECK(checked > 50);
  for (const EncoderConfig &c : {BaseConfig(), ToyConfig()})
    for (double secs : {0.5, 1.0, 3.7}) {
      const EncoderConfig h = HalveOneStride(c);
      CHECK(std::abs(c.OutputLength(static_cast<int>(secs * c.sample_rate)) -
                     h.OutputLength(static_cast<int>(secs * h.sample_rate))) <= 1);
    }
  const EncoderConfig base = BaseConfig();
  CHECK(HalveOneStride(base).OutputLength(8000) == base.OutputLength(16000));
}

TEST_CASE("toy length formula matches the forward pass") {
  EncoderConfig c = TinyConfig();
  c.conv = {{3, 4, 2}, {3, 2, 2}};
  CHECK(c.OutputLength(16) == 3);
  Wav2VecModel m(c);
  Rng rng(2);
  m.Initialize(InitScheme::kGlorot, &rng);
  const Var z = FeatureEncoder(m, Constant(RandomTensor(rng, {16, 1})));
  CHECK(z->value.Rows() == 3);
  CHECK(z->value.Cols() == 3);
  CHECK_THROWS_AS(FeatureEncoder(m, Constant(Tensor({3, 1}))), AsrError);
}

TEST_CASE("full-scale parameter counts") {
  // Base 95M, Large 317M, Large1-8 115M
  CHECK(std::abs(Wav2VecParameterCount(BaseConfig()) / 95e6 - 1.0) < 0.01);
  CHECK(std::abs(Wav2VecParameterCount(LargeConfig()) / 317e6 - 1.0) < 0.01);
  CHECK(std::abs(Wav2VecParameterCount(Large8Config()) / 115e6 - 1.0) < 0.01);
}

TEST_CASE("quantizer") {
  Rng rng(3);
  EncoderConfig c = TinyConfig();
  c.quantizer = {1, 2, 4, 3};
  Wav2VecModel m(c);
  m.Initialize(InitScheme::kGlorot, &rng);
  // logits come from the bias only: strongly favour entry 0
  m.Params().Get("quant.logits.weight")->value.Fill(0.0);
  Tensor &b = m.Params().Get("quant.logits.bias")->value;
  b[0] = 10.0;
  b[1] = -10.0;
  const Var feats = Constant(RandomTensor(rng, {5, 4}));
  const QuantizerOutput q = Quantize(m, feats, QuantMode::kHard, 1.0, nullptr);
  const Tensor &cb = m.Params().Get("quant.codebook")->value;
  const Var e0 = Constant(Tensor({1, 4}, std::vector<double>(cb.Data().begin(), cb.Data().begin() + 4)));
  const Var ref = LinearLayer(m.Params(), "quant.project", e0);
  for (int t = 0; t < 5; ++t) {
    CHECK(q.indices[t][0] == 0);
    for (int j = 0; j < 3; ++j) CHECK(q.q->value(t, j) == doctest::Approx(ref->value(0, j)));
  }

  // G = 2: pre-projection output is the concatenation of the chosen entries
  Wav2VecModel m2(TinyConfig());
  m2.Initialize(InitScheme::kGlorot, &rng);
  const QuantizerOutput q2 = Quantize(m2, feats, QuantMode::kGumbel, 1.0, &rng);
  const Tensor &cb2 = m2.Params().Get("quant.codebook")->value;
  for (int t = 0; t < 5; ++t)
    for (int g = 0; g < 2; ++g) {
      const int row = g * 3 + q2.indices[t][g];
      for (int j = 0; j < 2; ++j) CHECK(q2.selected->value(t, g * 2 + j) == cb2(row, j));
    }

  // straight-through: hard forward, nonzero gradient on the codebook logits
  Wav2VecModel m3(TinyConfig());
  m3.Initialize(InitScheme::kGlorot, &rng);
  const QuantizerOutput q3 = Quantize(m3, feats, QuantMode::kHard, 1.0, nullptr);
  Backward(SumAll(Mul(q3.q, Constant(RandomTensor(rng, q3.q->value.Shape())))));
  CHECK(m3.Params().Get("quant.logits.weight")->grad.SumSquares() > 0.0);
  CHECK_THROWS_AS(Quantize(m3, Constant(Tensor({2, 3})), QuantMode::kHard, 1.0, nullptr), AsrError);
}

TEST_CASE("gumbel selection frequency") {
  // argmax of (logits + Gumbel noise) is distributed as softmax(logits),
  // whatever the temperature
  Rng rng(4);
  EncoderConfig c = TinyConfig();
  c.quantizer = {1, 2, 4, 3};
  for (double gap : {2.0, 5.0}) {
    Wav2VecModel m(c);
    m.Initialize(InitScheme::kGlorot, &rng);
    m.Params().Get("quant.logits.weight")->value.Fill(0.0);
    Tensor &b = m.Params().Get("quant.logits.bias")->value;
    b[0] = gap;
    b[1] = 0.0;
    const QuantizerOutput q = Quantize(m, Constant(Tensor({10000, 4})), QuantMode::kGumbel, 0.01, &rng);
    int hits = 0;
    for (const auto &ix : q.indices) hits += ix[0] == 0;
    const double expected = 1.0 / (1.0 + std::exp(-gap));
    const double sd = std::sqrt(expected * (1 - expected) / 10000);
    CHECK(std::abs(hits / 10000.0 - expected) < 4 * sd);
    if (gap == 5.0) CHECK(hits / 10000.0 > 0.99);
  }
}

TEST_CASE("time masks") {
  Rng rng(5);
  CHECK(CountOnes(SampleSpanMask(100, {0.0, 10}, &rng)) == 0);
  CHECK(CountOnes(SampleSpanMask(100, {1.0, 1}, &rng)) == 100);
  const MaskConfig mc{0.065, 10};
  CHECK(ExpectedMaskFraction(mc) == doctest::Approx(0.4896).epsilon(1e-3));
  double total = 0.0;
  for (int seed = 0; seed < 100; ++seed) {
    Rng r(seed);
    total += CountOnes(SampleSpanMask(10000, mc, &r)) / 10000.0;
  }
  CHECK(std::abs(total / 100 - ExpectedMaskFraction(mc)) < 0.02);
  CHECK_THROWS_AS(SampleSpanMask(10, {1.5, 2}, &rng), AsrError);
}

TEST_CASE("contrastive loss") {
  const int k = 10;
  // all candidates identical
  Tensor same({1, 3}, {1.0, 2.0, 3.0});
  std::vector<std::vector<int>> cand{{0, 0, 0, 0, 0, 0, 0, 0, 0, 0, 0}};
  CHECK(ScalarValue(ContrastiveLoss(Constant(same), Constant(same), cand, 0.1)) ==
        doctest::Approx(std::log(k + 1.0)));
  // positive equals the context, distractors orthogonal
  Tensor ctx({1, 2}, {1.0, 0.0});
  Tensor tg({2, 2}, {1.0, 0.0, 0.0, 1.0});
  std::vector<std::vector<int>> c2{{0, 1, 1, 1, 1, 1, 1, 1, 1, 1, 1}};
  const double l = ScalarValue(ContrastiveLoss(Constant(ctx), Constant(tg), c2, 0.1));
  CHECK(l < 0.01);
  CHECK(l == doctest::Approx(std::log(1.0 + k * std::exp(-10.0))));
  // monotone in the positive's cosine similarity
  double prev = 1e9;
  for (int i = 0; i <= 20; ++i) {
    const double ang = std::numbers::pi * (1.0 - i / 20.0);
    Tensor t({2, 2}, {std::cos(ang), std::sin(ang), 0.0, 1.0});
    const double v = ScalarValue(ContrastiveLoss(Constant(ctx), Constant(t), c2, 0.1));
    CHECK(v < prev);
    prev = v;
  }
  CHECK_THROWS_AS(ContrastiveLoss(Constant(Tensor({1, 2})), Constant(tg), c2, 0.1), AsrError);
  try {
    ContrastiveLoss(Constant(Tensor({1, 2})), Constant(tg), c2, 0.1);
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kDegenerateVector);
  }
  Rng rng(6);
  const auto sc = SampleCandidates(5, 10, &rng);
  for (int i = 0; i < 5; ++i) {
    CHECK(sc[i][0] == i);
    for (int j = 1; j <= 10; ++j) CHECK(sc[i][j] != i);
  }
  CHECK_THROWS_AS(SampleCandidates(1, 3, &rng), AsrError);
  for (auto [n, d] : std::vector<std::pair<int, int>>{{2, 2}, {3, 4}, {5, 3}, {4, 6}, {6, 2}}) {
    const auto cands = SampleCandidates(n, 3, &rng);
    const GradCheckResult r = CheckGradients(
        [&](const std::vector<Var> &v) { return ContrastiveLoss(v[0], v[1], cands, 0.5); },
        {RandomTensor(rng, {n, d}), RandomTensor(rng, {n, d})});
    CHECK(r.max_rel_error < 1e-4);
  }
}

TEST_CASE("losses pass gradient checks through a 2-block encoder") {
  const EncoderConfig cfg = TinyConfig();
  const Layout layout = Wav2VecLayout(cfg);
  Rng rng(7);
  Wav2VecModel init(cfg);
  init.Initialize(InitScheme::kGlorot, &rng);
  const Tensor wave = RandomTensor(rng, {30, 1});
  const int frames = cfg.OutputLength(30);
  REQUIRE(frames == 7);
  std::vector<bool> mask(frames, false);
  mask[1] = mask[2] = mask[5] = true;
  const std::vector<int> masked{1, 2, 5};
  const auto cand = SampleCandidates(3, 2, &rng);
  std::vector<Tensor> inputs;
  for (const auto &v : init.Params().Values()) inputs.push_back(v->value);

  auto loss = [&](const std::vector<Var> &v, bool contrastive) {
    Wav2VecModel m(cfg);
    m.Params() = ParameterStore::Bind(layout, v);
    EncodeOptions opts;
    opts.time_mask = mask;
    const EncodeOutput enc = Encode(m, Constant(wave), opts);
    if (contrastive) {
      // targets from a constant copy of the features: the hard selection is
      // fixed, codebook and projection gradients are exact
      const QuantizerOutput q = Quantize(m, Constant(enc.features->value), QuantMode::kHard, 1.0, nullptr);
      const Var c = LinearLayer(m.Params(), "final_proj", GatherRows(enc.context, masked));
      return ContrastiveLoss(c, GatherRows(q.q, masked), cand, 0.1);
    }
    const QuantizerOutput q = Quantize(m, enc.features, QuantMode::kHard, 1.0, nullptr);
    return DiversityLoss(q.probs, cfg.quantizer.groups);
  };
  const GradCheckResult rc = CheckGradients([&](auto &v) { return loss(v, true); }, inputs);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    // the codebook logits only receive the straight-through surrogate
    if (layout[i].name.rfind("quant.logits", 0) == 0) continue;
    INFO(layout[i].name);
    CHECK(rc.rel_error[i] < 1e-4);
  }
  const GradCheckResult rd = CheckGradients([&](auto &v) { return loss(v, false); }, inputs);
  CHECK(rd.max_rel_error < 1e-4);
}

TEST_CASE("encoder truncation") {
  EncoderConfig cfg = ToyConfig();
  cfg.layers = 4;
  Wav2VecModel full(cfg);
  Rng rng(8);
  full.Initialize(InitScheme::kGlorot, &rng);
  const Checkpoint ck = full.ToCheckpoint();
  const Checkpoint same = TruncateEncoder(ck, 4);
  CHECK(same.names == ck.names);
  const Checkpoint two = TruncateEncoder(ck, 2);
  const Layout layout = Wav2VecLayout(cfg);
  CHECK(ck.NumParameters() - two.NumParameters() ==
        CountParameters(layout, "blocks.2.") + CountParameters(layout, "blocks.3."));
  for (const auto &n : two.names) CHECK(two.Get(n) == ck.Get(n));
  CHECK_THROWS_AS(TruncateEncoder(ck, 5), AsrError);
  try {
    TruncateEncoder(ck, 5);
  } catch (const AsrError &e) {
    CHECK(e.code() == ErrorCode::kTooFewBlocks);
  }
  const Wav2VecModel cut = Wav2VecModel::FromCheckpoint(two);
  CHECK(cut.Config().layers == 2);
  const Tensor wave = RandomTensor(rng, {800, 1});
  const EncodeOutput a = Encode(full, Constant(wave), {});
  const EncodeOutput b = Encode(cut, Constant(wave), {});
  CHECK(a.blocks.size() == 4);
  CHECK(b.context->value == a.blocks[1]->value);
}

TEST_CASE("pre-training") {
  Rng rng(9);
  std::vector<AudioSegment> corpus;
  for (int i = 0; i < 50; ++i) corpus.push_back(TwoPhoneUtterance(rng, 8000, 6));
  PretrainConfig cfg;
  cfg.epochs = 20;
  cfg.batch_utterances = 5;
  cfg.schedule = LrSchedule(2e-3);
  cfg.seed = 11;
  Wav2VecModel m = InitPretrainModel(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const PretrainResult res = Pretrain(corpus, cfg, &m);
  MESSAGE("20 epochs: ", std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), " s");
  REQUIRE(res.log.size() == 21);
  for (const auto &r : res.log) MESSAGE(r.epoch, " loss ", r.loss, " c ", r.contrastive, " d ", r.diversity);
  CHECK(res.log[20].loss < res.log[1].loss);
  CHECK(res.log[1].tau == 2.0);
  CHECK(res.log[20].tau == doctest::Approx(0.5));

  // continued pre-training from a checkpoint of itself with 0 epochs
  const std::string dir = (std::filesystem::temp_directory_path() / "ssl-test").string();
  std::filesystem::create_directories(dir);
  WriteCheckpoint(m.ToCheckpoint(), dir + "/self.ckpt");
  PretrainConfig cont = cfg;
  cont.init_checkpoint = dir + "/self.ckpt";
  cont.epochs = 0;
  cont.seed = 99;
  Wav2VecModel m2 = InitPretrainModel(cont);
  Pretrain(corpus, cont, &m2);
  for (std::size_t i = 0; i < m.Params().Values().size(); ++i)
    CHECK(m2.Params().Values()[i]->value == m.Params().Values()[i]->value);

  // checkpoints per epoch and a CSV log
  PretrainConfig out = cfg;
  out.epochs = 2;
  out.out_dir = dir + "/run";
  Wav2VecModel m3 = InitPretrainModel(out);
  const PretrainResult r3 = Pretrain(std::vector<AudioSegment>(corpus.begin(), corpus.begin() + 5), out, &m3);
  CHECK(r3.checkpoints.size() == 2);
  CHECK(std::filesystem::exists(out.out_dir + "/log.csv"));
  const Wav2VecModel back = Wav2VecModel::FromCheckpoint(ReadCheckpoint(r3.checkpoints[1]));
  CHECK(back.Params().Get("proj.weight")->value == m3.Params().Get("proj.weight")->value);

  // shape mismatch on continued pre-training
  PretrainConfig wrong = cfg;
  wrong.encoder.model_dim = 16;
  wrong.init_checkpoint = dir + "/self.ckpt";
  CHECK_THROWS_AS(InitPretrainModel(wrong), AsrError);
  std::filesystem::remove_all(dir);
}

TEST_CASE("initialisation schemes give different initial losses") {
  Rng rng(10);
  std::vector<AudioSegment> corpus;
  for (int i = 0; i < 5; ++i) corpus.push_back(TwoPhoneUtterance(rng, 8000, 6));
  PretrainConfig cfg;
  cfg.epochs = 0;
  cfg.init = InitScheme::kKaiming;
  Wav2VecModel a = InitPretrainModel(cfg);
  const double la = Pretrain(corpus, cfg, &a).log[0].loss;
  cfg.init = InitScheme::kGlorot;
  Wav2VecModel b = InitPretrainModel(cfg);
  const double lb = Pretrain(corpus, cfg, &b).log[0].loss;
  CHECK(std::isfinite(la));
  CHECK(std::isfinite(lb));
  CHECK(la != lb);
}

TEST_CASE("waveform augmentation") {
  Rng rng(11);
  AudioSegment seg;
  seg.sample_rate = 8000;
  for (int i = 0; i < 1000; ++i) seg.samples.push_back(rng.Gauss());
  CHECK(SpeedPerturb(seg, 1.0).samples == seg.samples);
  CHECK(SpeedPerturb(seg, 0.9).samples.size() == 1111);
  CHECK(SpeedPerturb(seg, 1.15).samples.size() == 870);
  CHECK(ApplyRir(seg, {1.0}).samples == seg.samples);
  // two-tap RIR oracle
  const AudioSegment echo = ApplyRir(seg, {1.0, 0.0, 0.5});
  for (int i = 2; i < 1000; ++i)
    CHECK(echo.samples[i] == doctest::Approx(seg.samples[i] + 0.5 * seg.samples[i - 2]));

  // pitch shift keeps the length and scales a tone's frequency by 2^(c/1200)
  AudioSegment tone;
  tone.sample_rate = 8000;
  for (int i = 0; i < 8000; ++i) tone.samples.push_back(std::sin(2 * std::numbers::pi * 400.0 * i / 8000));
  for (double cents : {300.0, -300.0}) {
    const AudioSegment p = PitchShift(tone, cents);
    REQUIRE(p.samples.size() == 8000);
    int crossings = 0;
    for (int i = 1000; i < 7000; ++i) crossings += (p.samples[i - 1] < 0) != (p.samples[i] < 0);
    const double freq = crossings / 2.0 / 0.75;
    CHECK(freq == doctest::Approx(400.0 * std::pow(2.0, cents / 1200)).epsilon(0.03));
  }
  for (int i = 0; i < 20; ++i) {
    const AugmentPolicy p = SampleAugmentPolicy(&rng);
    CHECK((p.speed == 0.9 || p.speed == 1.1 || p.speed == 1.15));
    CHECK(std::abs(p.pitch_cents) >= 250.0);
    CHECK(std::abs(p.pitch_cents) <= 350.0);
    const AudioSegment out = AugmentWaveform(seg, p, &rng);
    CHECK(out.samples.size() == static_cast<std::size_t>(std::llround(1000 / p.speed)));
    for (double v : out.samples) CHECK(std::isfinite(v));
  }
}

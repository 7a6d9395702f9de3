// pipeline/experiment.cc

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

#include "pipeline/experiment.h"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include "base/asr-error.h"
#include "decoder/lexicon.h"
#include "decoder/wer.h"
#include "finetune/finetune.h"
#include "hmm/acoustic-model.h"
#include "lm/ngram-model.h"
#include "lm/vocabulary.h"
#include "nnet/checkpoint.h"
#include "pipeline/manifest.h"
#include "pipeline/recipe.h"
#include "pipeline/synth-corpus.h"
#include "ssl/pretrain.h"

namespace asrlab {

namespace fs = std::filesystem;

namespace {

struct CorpusFiles {
  std::string manifest, lexicon, phones, lm_text, silence;
};

std::string Join(const std::string &dir, const std::string &name) {
  return (fs::path(dir) / name).string();
}

CorpusFiles ReadCorpusFiles(const std::string &dir) {
  const KvConfig kv = KvConfig::ReadFile(Join(dir, "corpus.conf"));
  return {kv.GetString("manifest"), kv.GetString("lexicon"), kv.GetString("phones"),
          kv.GetString("lm_text"), kv.GetString("silence")};
}

PhoneSet ReadPhoneSet(const std::string &path, const std::string &silence) {
  std::ifstream is(path);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot read '", path, "'");
  std::vector<std::string> names;
  std::string p;
  while (is >> p) names.push_back(p);
  return PhoneSet(names, silence);
}

std::vector<const ManifestEntry *> Entries(const CorpusManifest &m,
                                           const std::vector<std::string> &splits) {
  std::vector<const ManifestEntry *> out;
  for (const auto &s : splits)
    for (const ManifestEntry *e : m.Split(s)) out.push_back(e);
  return out;
}

Transcripts TranscriptsOf(const std::vector<const ManifestEntry *> &entries) {
  Transcripts t;
  for (const ManifestEntry *e : entries)
    if (e->transcript) t[e->id] = *e->transcript;
  return t;
}

std::vector<std::string> IdsOf(const std::vector<const ManifestEntry *> &entries) {
  std::vector<std::string> ids;
  for (const ManifestEntry *e : entries) ids.push_back(e->id);
  return ids;
}

FeatureSet LoadFeatureSet(const std::string &dir, const std::vector<const ManifestEntry *> &entries) {
  FeatureSet out;
  for (const ManifestEntry *e : entries)
    out[e->id] = ReadFeaturesFile(Join(dir, "feats/" + e->id + ".feats"));
  return out;
}

std::string CheckpointName(int epoch) {
  std::ostringstream name;
  name << "epoch" << std::setw(3) << std::setfill('0') << epoch << ".ckpt";
  return name.str();
}

// "pretrained@N" -> N, "pretrained" -> -1, otherwise -2.
int PretrainEpochOf(const std::string &system) {
  if (system == "pretrained") return -1;
  const std::string p = "pretrained@";
  if (system.compare(0, p.size(), p) != 0) return -2;
  KvConfig tmp;
  tmp.Set("e", system.substr(p.size()));
  const long e = tmp.GetInt("e");
  if (e < 0) ThrowError(ErrorCode::kInvalidArgument, "bad system '", system, "'");
  return static_cast<int>(e);
}

void CheckSystem(const std::string &system) {
  if (system != "gmm" && system != "scratch" && PretrainEpochOf(system) == -2)
    ThrowError(ErrorCode::kInvalidArgument, "unknown system '", system, "'");
}

std::string ReadText(const std::string &path) {
  std::ifstream is(path);
  if (!is) ThrowError(ErrorCode::kIoError, "cannot read '", path, "'");
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void WriteText(const std::string &path, const std::string &text) {
  std::ofstream os(path);
  os << text;
  if (!os) ThrowError(ErrorCode::kIoError, "cannot write '", path, "'");
}

KvConfig WithSeed(KvConfig section, const KvConfig &cfg) {
  if (!section.Has("seed") && cfg.Has("seed")) section.Set("seed", cfg.GetString("seed"));
  return section;
}

}  // namespace

KvConfig DefaultExperimentConfig() {
  KvConfig kv;
  kv.Set("systems", "gmm,scratch,pretrained");
  kv.Set("splits", "dev,test");
  kv.Set("seed", 1);
  kv.Set("synth.mode", "waveform");
  kv.Set("synth.pretrain_utts", 160);
  kv.Set("synth.train_utts", 80);
  kv.Set("synth.dev_utts", 20);
  kv.Set("synth.test_utts", 20);
  kv.Set("synth.noise", 0.1);
  kv.Set("gmm.max_leaves", 40);
  kv.Set("gmm.components", 2);
  kv.Set("lm.order", 3);
  kv.Set("pretrain.epochs", 20);
  kv.Set("pretrain.lr", 2e-3);
  kv.Set("pretrain.init", "glorot");
  kv.Set("pretrain.mask_prob", 0.1);
  kv.Set("pretrain.mask_span", 4);
  kv.Set("pretrain.tau_start", 1.0);
  kv.Set("finetune.model.encoder", "wav2vec");
  kv.Set("finetune.epochs", 40);
  kv.Set("finetune.lr", 2e-3);
  kv.Set("finetune.batch_frames", 300);
  kv.Set("decode.gmm.lm_scale", 10.0);
  kv.Set("decode.hybrid.lm_scale", 2.0);
  return kv;
}

std::string SystemStageSuffix(const std::string &system) {
  CheckSystem(system);
  const int e = PretrainEpochOf(system);
  return e >= 0 ? "pretrained-e" + std::to_string(e) : system;
}

std::vector<StageDef> BuildExperimentStages(const KvConfig &cfg) {
  std::vector<StageDef> stages;
  const std::vector<std::string> systems = cfg.GetStringList("systems");
  const std::vector<std::string> splits = cfg.GetStringList("splits");
  if (systems.empty()) ThrowError(ErrorCode::kInvalidArgument, "no systems configured");
  if (splits.empty()) ThrowError(ErrorCode::kInvalidArgument, "no splits configured");
  for (const auto &s : splits)
    if (!IsKnownSplit(s)) ThrowError(ErrorCode::kInvalidArgument, "unknown split '", s, "'");
  bool need_pretrain = false;
  for (const auto &s : systems) {
    CheckSystem(s);
    need_pretrain = need_pretrain || PretrainEpochOf(s) >= -1;
  }

  // corpus
  {
    StageDef st;
    st.name = "corpus";
    if (cfg.Has("corpus.manifest")) {
      st.config = cfg.Section("corpus");
      for (const char *key : {"manifest", "lexicon", "phones", "lm_text"}) {
        const std::string path = fs::absolute(st.config.GetString(key)).string();
        st.config.Set(key, path);
        st.config.Set(std::string(key) + ".sha256", Sha256File(path));
      }
      if (!st.config.Has("silence")) st.config.Set("silence", "sil");
      st.run = [](const StageContext &ctx) { ctx.config->WriteFile(Join(ctx.dir, "corpus.conf")); };
    } else {
      const SynthConfig sc = SynthConfig::FromKv(WithSeed(cfg.Section("synth"), cfg));
      st.config = sc.ToKv();
      st.run = [sc](const StageContext &ctx) {
        const SynthCorpus corpus = SynthesizeCorpus(sc);
        KvConfig files;
        files.Set("manifest", WriteSynthCorpus(corpus, ctx.dir));
        files.Set("lexicon", Join(ctx.dir, "lexicon.txt"));
        files.Set("phones", Join(ctx.dir, "phones.txt"));
        files.Set("lm_text", Join(ctx.dir, "lm.txt"));
        files.Set("silence", corpus.phones.Name(corpus.phones.Silence()));
        files.WriteFile(Join(ctx.dir, "corpus.conf"));
      };
    }
    stages.push_back(std::move(st));
  }

  // features
  {
    const MfccConfig mc = MfccConfigFromKv(cfg.Section("features"));
    StageDef st{"features", {"corpus"}, MfccConfigToKv(mc), nullptr};
    st.run = [mc](const StageContext &ctx) {
      const CorpusManifest m = ReadManifest(ReadCorpusFiles(ctx.inputs.at("corpus")).manifest);
      m.Validate();
      fs::create_directories(Join(ctx.dir, "feats"));
      for (const ManifestEntry *e : Entries(m, {"train", "dev", "test"}))
        WriteFeaturesFile(Join(ctx.dir, "feats/" + e->id + ".feats"), ComputeFeatures(*e, mc));
    };
    stages.push_back(std::move(st));
  }

  // gmm
  {
    const GmmConfig gc = GmmConfig::FromKv(cfg.Section("gmm"));
    StageDef st{"gmm", {"corpus", "features"}, gc.ToKv(), nullptr};
    st.run = [gc](const StageContext &ctx) {
      const CorpusFiles files = ReadCorpusFiles(ctx.inputs.at("corpus"));
      const CorpusManifest m = ReadManifest(files.manifest);
      const auto train = m.Split("train");
      const GmmSystem sys = TrainGmmSystem(
          LoadFeatureSet(ctx.inputs.at("features"), train), TranscriptsOf(train),
          ReadLexicon(files.lexicon), ReadPhoneSet(files.phones, files.silence), gc);
      WriteAcousticModelFile(Join(ctx.dir, "mono.mdl"), sys.monophone);
      WriteAcousticModelFile(Join(ctx.dir, "final.mdl"), sys.model);
      std::ofstream log(Join(ctx.dir, "log.csv"));
      log << "stage,iteration,log_likelihood\n";
      for (std::size_t i = 0; i < sys.mono_log_likelihood.size(); ++i)
        log << "mono," << i + 1 << ',' << FormatDouble(sys.mono_log_likelihood[i]) << '\n';
      for (std::size_t i = 0; i < sys.tri_log_likelihood.size(); ++i)
        log << "tri," << i + 1 << ',' << FormatDouble(sys.tri_log_likelihood[i]) << '\n';
    };
    stages.push_back(std::move(st));
  }

  const DecodeSettings ds = DecodeSettings::FromKv(cfg.Section("decode"));

  // align: tied-state labels for train and dev, and state priors from train
  {
    StageDef st{"align", {"corpus", "features", "gmm"}, {}, nullptr};
    st.config.Set("prior_floor", ds.prior_floor);
    const double floor = ds.prior_floor;
    st.run = [floor](const StageContext &ctx) {
      const CorpusFiles files = ReadCorpusFiles(ctx.inputs.at("corpus"));
      const CorpusManifest m = ReadManifest(files.manifest);
      const auto entries = Entries(m, {"train", "dev"});
      const AcousticModel model = ReadAcousticModelFile(Join(ctx.inputs.at("gmm"), "final.mdl"));
      const Alignments ali =
          AlignCorpus(model, ReadLexicon(files.lexicon),
                      LoadFeatureSet(ctx.inputs.at("features"), entries), TranscriptsOf(entries));
      WriteAlignments(Join(ctx.dir, "ali.txt"), ali);
      std::vector<std::vector<int>> train_ali;
      for (const ManifestEntry *e : m.Split("train")) train_ali.push_back(ali.at(e->id));
      WriteVector(Join(ctx.dir, "priors.txt"),
                  EstimateStatePriors(train_ali, model.NumEmissions(), floor));
    };
    stages.push_back(std::move(st));
  }

  // lm
  {
    const LmConfig lc = LmConfig::FromKv(cfg.Section("lm"));
    StageDef st{"lm", {"corpus"}, lc.ToKv(), nullptr};
    st.run = [lc](const StageContext &ctx) {
      const CorpusFiles files = ReadCorpusFiles(ctx.inputs.at("corpus"));
      WriteArpaFile(Join(ctx.dir, "lm.arpa"),
                    TrainLm(ReadTextCorpus(files.lm_text), ReadLexicon(files.lexicon), lc));
    };
    stages.push_back(std::move(st));
  }

  KvConfig pre_kv = WithSeed(cfg.Section("pretrain"), cfg);
  pre_kv.Set("out_dir", "");
  pre_kv.Set("init_checkpoint", pre_kv.GetString("init_checkpoint", ""));
  const ssl::PretrainConfig pc = ssl::PretrainConfig::FromKv(pre_kv);
  if (need_pretrain) {
    StageDef st{"pretrain", {"corpus"}, pc.ToKv(), nullptr};
    st.run = [pc](const StageContext &ctx) {
      const CorpusManifest m = ReadManifest(ReadCorpusFiles(ctx.inputs.at("corpus")).manifest);
      ssl::PretrainConfig run = pc;
      run.out_dir = ctx.dir;
      ssl::Wav2VecModel model = ssl::InitPretrainModel(run);
      const ssl::PretrainResult r = ssl::Pretrain(LoadAudio(Entries(m, {"pretrain", "train"})), run,
                                                  &model);
      ssl::WritePretrainLog(r.log, Join(ctx.dir, "log.csv"));
    };
    stages.push_back(std::move(st));
  }

  // One fine-tuning and one decoding stage per system.
  KvConfig ft_kv = WithSeed(cfg.Section("finetune"), cfg);
  if (ft_kv.Section("model.wav2vec").Values().empty())
    ft_kv.Merge(ssl::EncoderConfigToKv(pc.encoder), "model.wav2vec");
  ft_kv.Set("log_path", "");
  std::vector<std::string> decode_stages;
  for (const auto &system : systems) {
    const std::string suffix = SystemStageSuffix(system);
    const bool hybrid = system != "gmm";
    if (hybrid) {
      int epoch = PretrainEpochOf(system);
      if (epoch == -1) epoch = pc.epochs;
      if (epoch > pc.epochs)
        ThrowError(ErrorCode::kInvalidArgument, "system '", system, "' needs pre-training epoch ",
                   epoch, " of ", pc.epochs);
      const bool pretrained = epoch >= 0;
      StageDef st{"finetune-" + suffix, {"corpus", "features", "align"}, ft_kv, nullptr};
      if (pretrained) {
        st.deps.push_back("pretrain");
        st.config.Set("pretrain_epoch", epoch);
      }
      st.run = [ft_kv, pretrained, epoch](const StageContext &ctx) {
        const CorpusManifest m = ReadManifest(ReadCorpusFiles(ctx.inputs.at("corpus")).manifest);
        const std::string feat_dir = ctx.inputs.at("features");
        const Alignments ali = ReadAlignments(Join(ctx.inputs.at("align"), "ali.txt"));
        const auto train_e = m.Split("train");
        const auto dev_e = m.Split("dev");
        const auto train = MakeFinetuneData(train_e, LoadFeatureSet(feat_dir, train_e), ali);
        const auto dev = MakeFinetuneData(dev_e, LoadFeatureSet(feat_dir, dev_e), ali);
        KvConfig kv = ft_kv;
        kv.Set("model.num_labels",
               static_cast<long>(ReadVector(Join(ctx.inputs.at("align"), "priors.txt")).size()));
        FinetuneConfig fc = FinetuneConfig::FromKv(kv);
        fc.log_path = Join(ctx.dir, "log.csv");
        nnet::Checkpoint init;
        if (pretrained) init = nnet::ReadCheckpoint(Join(ctx.inputs.at("pretrain"), CheckpointName(epoch)));
        HybridModel model = BuildFinetuneModel(fc, pretrained ? &init : nullptr);
        const FinetuneResult r = Finetune(train, dev, fc, &model);
        nnet::WriteCheckpoint(model.ToCheckpoint(), Join(ctx.dir, "final.ckpt"));
        KvConfig summary;
        summary.Set("best_epoch", r.best_epoch);
        summary.Set("best_dev_accuracy", r.best_dev_accuracy);
        summary.WriteFile(Join(ctx.dir, "summary.conf"));
      };
      stages.push_back(std::move(st));
    }

    StageDef dec{"decode-" + suffix, {"corpus", "features", "gmm", "lm"}, {}, nullptr};
    const DecodeConfig dc = hybrid ? ds.hybrid : ds.gmm;
    dec.config.Set("system", system);
    dec.config.Set("splits", cfg.GetString("splits"));
    dec.config.Merge(DecodeSettings{dc, dc, ds.prior_floor}.ToKv().Section("gmm"));
    if (hybrid) dec.deps.insert(dec.deps.end(), {"align", "finetune-" + suffix});
    dec.run = [system, splits, dc, hybrid, suffix](const StageContext &ctx) {
      const CorpusFiles files = ReadCorpusFiles(ctx.inputs.at("corpus"));
      const CorpusManifest m = ReadManifest(files.manifest);
      const Lexicon lexicon = ReadLexicon(files.lexicon);
      const NGramModel lm = ReadArpaFile(Join(ctx.inputs.at("lm"), "lm.arpa"));
      const AcousticModel model = ReadAcousticModelFile(Join(ctx.inputs.at("gmm"), "final.mdl"));
      WerReport report;
      for (const auto &split : splits) {
        const auto entries = m.Split(split);
        const FeatureSet feats = LoadFeatureSet(ctx.inputs.at("features"), entries);
        Transcripts hyp;
        if (hybrid) {
          const HybridModel net = HybridModel::FromCheckpoint(
              nnet::ReadCheckpoint(Join(ctx.inputs.at("finetune-" + suffix), "final.ckpt")));
          const std::vector<double> priors = ReadVector(Join(ctx.inputs.at("align"), "priors.txt"));
          hyp = DecodeWithHybrid(net, priors, model, lexicon, lm,
                                 MakeFinetuneData(entries, feats, {}), dc);
        } else {
          hyp = DecodeWithGmm(model, lexicon, lm, feats, IdsOf(entries), dc);
        }
        WriteTranscripts(Join(ctx.dir, "hyp-" + split + ".txt"), hyp);
        report.Add(system, split, ScoreCorpus(TranscriptsOf(entries), hyp));
      }
      WriteText(Join(ctx.dir, "wer.csv"), FormatWerCsv(report));
    };
    decode_stages.push_back(dec.name);
    stages.push_back(std::move(dec));
  }

  {
    StageDef st{"report", decode_stages, {}, nullptr};
    st.config.Set("systems", cfg.GetString("systems"));
    st.run = [decode_stages](const StageContext &ctx) {
      WerReport report;
      for (const auto &name : decode_stages) {
        const WerReport part = ParseWerCsv(ReadText(Join(ctx.inputs.at(name), "wer.csv")));
        for (const WerRow &row : part.Rows()) report.Add(row.system, row.split, row.wer);
      }
      WriteText(Join(ctx.dir, "report.txt"), FormatWerTable(report));
      WriteText(Join(ctx.dir, "report.csv"), FormatWerCsv(report));
    };
    stages.push_back(std::move(st));
  }
  return stages;
}

ExperimentResult RunExperiment(const KvConfig &cfg, const std::string &cache_root) {
  StageRunner runner(cache_root);
  ExperimentResult result;
  result.stages = runner.Run(BuildExperimentStages(cfg));
  result.report_dir = result.stages.back().dir;
  result.report = ParseWerCsv(ReadText(Join(result.report_dir, "report.csv")));
  if (cfg.Has("output_dir")) {
    const std::string out = cfg.GetString("output_dir");
    fs::create_directories(out);
    for (const char *name : {"report.txt", "report.csv"})
      fs::copy_file(Join(result.report_dir, name), Join(out, name),
                    fs::copy_options::overwrite_existing);
  }
  return result;
}

std::vector<SweepRow> RunCheckpointSweep(const KvConfig &cfg, const std::vector<int> &epochs,
                                         const std::string &cache_root) {
  if (epochs.empty()) ThrowError(ErrorCode::kInvalidArgument, "no sweep epochs");
  KvConfig run = cfg;
  std::string systems;
  for (int e : epochs) systems += (systems.empty() ? "" : ",") + ("pretrained@" + std::to_string(e));
  run.Set("systems", systems);
  const std::string split = cfg.GetStringList("splits").at(0);
  const ExperimentResult r = RunExperiment(run, cache_root);
  std::vector<SweepRow> rows;
  for (int e : epochs) {
    const WerRow *row = r.report.Find("pretrained@" + std::to_string(e), split);
    if (!row) ThrowError(ErrorCode::kStageFailure, "no result for epoch ", e);
    rows.push_back({e, row->wer});
  }
  return rows;
}

std::string FormatSweepCsv(const std::vector<SweepRow> &rows) {
  std::ostringstream os;
  os << "pretrain_epoch,wer,substitutions,insertions,deletions,reference_words\n";
  for (const auto &r : rows)
    os << r.pretrain_epoch << ',' << FormatDouble(r.wer.wer) << ',' << r.wer.substitutions << ','
       << r.wer.insertions << ',' << r.wer.deletions << ',' << r.wer.reference_words << '\n';
  return os.str();
}

}  // namespace asrlab

// tools/avst.cc

// Copyright 2026  The AVST Authors

// See the top-level LICENSE file for the full license text.
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

// avst: command-line front end for corpus preparation, training, adaptation,
// decoding, scoring and the full experiment matrix.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/text-utils.h"
#include "avst/corpus/mixing.h"
#include "avst/corpus/synthetic.h"
#include "avst/corpus/wave-io.h"
#include "avst/decoder/decode-graph.h"
#include "avst/decoder/wer.h"
#include "avst/dsp/visual.h"
#include "avst/nnet/model-io.h"
#include "avst/pipeline/corpus-data.h"
#include "avst/pipeline/evaluation.h"
#include "avst/pipeline/experiment.h"
#include "avst/pipeline/training.h"

namespace fs = std::filesystem;

namespace avst {
namespace {

void Log(const std::string &msg) { std::cerr << "[avst] " << msg << std::endl; }

struct Options {
  std::string config, out, manifest, splits, grammar, lexicon, model, variant, modality = "a";
  std::string condition = "two", ref, hyp, split = "test";
  std::optional<uint64_t> seed;
  int speaker = -1;
  double gain = 0.5;
};

// Config from --config (or the synthetic default) with flag overrides.
ExperimentConfig ResolveConfig(const Options &o) {
  ExperimentConfig cfg =
      o.config.empty() ? DefaultSyntheticExperiment() : LoadExperimentConfig(o.config);
  if (o.seed) cfg.seed = *o.seed;
  if (!o.manifest.empty()) {
    cfg.corpus.synthetic.reset();
    cfg.corpus.manifest = o.manifest;
    cfg.corpus.splits = o.splits;
    if (!o.grammar.empty()) cfg.corpus.grammar = o.grammar;
    if (!o.lexicon.empty()) cfg.corpus.lexicon = o.lexicon;
    if (cfg.corpus.grammar.empty()) cfg.corpus.grammar = ResolvePath(DirName(o.manifest), "grammar.txt");
    if (cfg.corpus.lexicon.empty()) cfg.corpus.lexicon = ResolvePath(DirName(o.manifest), "lexicon.txt");
  } else {
    if (!o.splits.empty()) cfg.corpus.splits = o.splits;
    if (!o.grammar.empty()) cfg.corpus.grammar = o.grammar;
    if (!o.lexicon.empty()) cfg.corpus.lexicon = o.lexicon;
  }
  cfg.Validate();
  Log("resolved config " + ConfigHash(cfg) + ":");
  std::cerr << FormatExperimentConfig(cfg);
  return cfg;
}

void RequireFlag(const std::string &value, const char *flag) {
  if (value.empty()) throw UsageError(std::string("missing required flag ") + flag);
}

Modality SiModality(const std::string &s) {
  const Modality m = ParseModality(s);
  if (m != Modality::kA && m != Modality::kAV) throw UsageError("--modality must be a or av");
  return m;
}

const std::vector<std::string> &SplitIds(const CorpusData &data, const std::string &split) {
  if (split == "train") return data.splits.train;
  if (split == "valid") return data.splits.valid;
  if (split == "test") return data.splits.test;
  throw UsageError("--split must be train, valid or test");
}

void EnsureParent(const std::string &path) {
  const fs::path parent = fs::path(path).parent_path();
  if (!parent.empty()) fs::create_directories(parent);
}

int CmdSynth(const Options &o) {
  RequireFlag(o.out, "--out");
  ExperimentConfig cfg =
      o.config.empty() ? DefaultSyntheticExperiment() : LoadExperimentConfig(o.config);
  if (!cfg.corpus.synthetic) throw UsageError("synth needs a config with corpus.synthetic");
  SyntheticSpec spec = *cfg.corpus.synthetic;
  if (o.seed) spec.seed = *o.seed;
  if (!cfg.corpus.grammar.empty()) spec.grammar = LoadGrammar(cfg.corpus.grammar);
  if (!cfg.corpus.lexicon.empty()) spec.lexicon = LoadLexicon(cfg.corpus.lexicon);
  const SyntheticCorpus corpus = SynthesizeCorpus(spec);
  WriteSyntheticCorpus(corpus, o.out);
  SaveSplits(o.out + "/splits.json", MakeSplits(corpus.manifest, cfg.split_ratios, cfg.split_seed));
  Log("synth: wrote " + std::to_string(corpus.manifest.entries.size()) + " utterances to " + o.out);
  return 0;
}

int CmdMix(const Options &o) {
  RequireFlag(o.manifest, "--manifest");
  RequireFlag(o.splits, "--splits");
  RequireFlag(o.out, "--out");
  const Manifest manifest = LoadManifest(o.manifest);
  const SplitSet splits = LoadSplits(o.splits);
  ValidateSplits(splits, manifest);
  const uint64_t seed = o.seed.value_or(7);
  std::map<std::string, const ManifestEntry *> by_id;
  for (const auto &e : manifest.entries) by_id[e.utt_id] = &e;
  std::vector<const ManifestEntry *> pool;
  for (const auto &id : splits.background) pool.push_back(by_id.at(id));

  fs::create_directories(fs::path(o.out) / "wav");
  const fs::path out_dir = fs::absolute(o.out);
  Manifest mixed;
  mixed.num_speakers = manifest.num_speakers;
  mixed.base_dir = o.out;
  for (const auto *list : {&splits.train, &splits.valid, &splits.test})
    for (const auto &id : *list) {
      const ManifestEntry &t = *by_id.at(id);
      const MixturePair pair = PairBackground(t, pool, seed);
      const ManifestEntry &b = *by_id.at(pair.background);
      Waveform w = MixWaveforms(ReadWav(ResolvePath(manifest.base_dir, t.wav)),
                                ReadWav(ResolvePath(manifest.base_dir, b.wav)), o.gain);
      QuantizeTo16Bit(&w.samples);
      ManifestEntry e = t;
      e.wav = "wav/" + t.utt_id + ".wav";
      WriteWav((out_dir / e.wav).string(), w);
      auto rel = [&](const std::optional<std::string> &p) -> std::optional<std::string> {
        if (!p) return p;
        return fs::relative(fs::absolute(ResolvePath(manifest.base_dir, *p)), out_dir).string();
      };
      e.roi = rel(t.roi);
      e.align = rel(t.align);
      e.background = pair.background;
      e.mix_seed = seed;
      mixed.entries.push_back(std::move(e));
    }
  SaveManifest((out_dir / "manifest.jsonl").string(), mixed);
  Log("mix: wrote " + std::to_string(mixed.entries.size()) + " mixtures to " + o.out);
  return 0;
}

int CmdFeatures(const Options &o) {
  RequireFlag(o.manifest, "--manifest");
  RequireFlag(o.out, "--out");
  const ExperimentConfig cfg =
      o.config.empty() ? DefaultSyntheticExperiment() : LoadExperimentConfig(o.config);
  const Manifest manifest = LoadManifest(o.manifest);
  fs::create_directories(o.out);
  for (const auto &e : manifest.entries) {
    const Utterance u = LoadUtterance(manifest, e, true);
    const FeatureMatrix feat = AcousticFeatures(u.wave, cfg.logmel, cfg.context_radius);
    WriteFeatureMatrix(o.out + "/" + e.utt_id + ".feat", feat);
    if (u.visual)
      WriteFeatureMatrix(o.out + "/" + e.utt_id + ".visual.feat",
                         AlignVisual(*u.visual, static_cast<int>(feat.rows()),
                                     cfg.logmel.hop_length));
  }
  Log("features: wrote " + std::to_string(manifest.entries.size()) + " utterances to " + o.out);
  return 0;
}

Condition ParseConditionFlag(const std::string &s) { return ParseCondition(s); }

int CmdTrainSi(const Options &o) {
  RequireFlag(o.out, "--out");
  const ExperimentConfig cfg = ResolveConfig(o);
  const CorpusData data = LoadCorpus(cfg);
  const Cell cell{ModelKind::kSI, SiModality(o.modality), ParseConditionFlag(o.condition)};
  const PreparedSet train = PrepareSet(data, data.splits.train, cell.condition, cfg);
  const PreparedSet valid = data.splits.valid.empty()
                                ? PreparedSet()
                                : PrepareSet(data, data.splits.valid, cell.condition, cfg);
  const TrainResult r = TrainSpeakerIndependent(
      cfg, data, train, valid, cell.modality, CellSeed(cfg, cell), [](const EpochStats &e) {
        Log("epoch " + std::to_string(e.epoch) + " valid_loss " + std::to_string(e.valid_loss));
      });
  EnsureParent(o.out);
  SaveModel(o.out, r.model);
  Log("train-si: saved " + r.model.spec.Describe() + " to " + o.out);
  return 0;
}

int CmdAdapt(const Options &o, bool targeted) {
  RequireFlag(o.model, "--model");
  RequireFlag(o.out, "--out");
  const ExperimentConfig cfg = ResolveConfig(o);
  const CorpusData data = LoadCorpus(cfg);
  const DnnModel si = LoadModel(o.model);
  if (si.spec.modality != Modality::kA && si.spec.modality != Modality::kAV)
    throw UsageError("--model must be a speaker-independent model");
  Cell cell{ModelKind::kSD, si.spec.modality, ParseConditionFlag(o.condition)};
  if (targeted) {
    RequireFlag(o.variant, "--variant");
    const FusionVariant v = ParseVariant(o.variant);
    cell.kind = v == FusionVariant::kA   ? ModelKind::kSTA
                : v == FusionVariant::kB ? ModelKind::kSTB
                : v == FusionVariant::kC ? ModelKind::kSTC
                                         : throw UsageError("--variant must be a, b or c");
  } else if (o.speaker < 0) {
    throw UsageError("missing required flag --speaker");
  } else if (o.speaker >= data.manifest.num_speakers) {
    throw UsageError("--speaker " + std::to_string(o.speaker) + " is not in the corpus");
  }
  const PreparedSet train = PrepareSet(data, data.splits.train, cell.condition, cfg);
  const PreparedSet valid = data.splits.valid.empty()
                                ? PreparedSet()
                                : PrepareSet(data, data.splits.valid, cell.condition, cfg);
  auto log = [](const EpochStats &e) {
    Log("epoch " + std::to_string(e.epoch) + " valid_loss " + std::to_string(e.valid_loss));
  };
  const uint64_t seed = CellSeed(cfg, cell);
  const TrainResult r =
      targeted ? AdaptSpeakerTargeted(cfg, data, si, KindVariant(cell.kind), train, valid, seed, log)
               : AdaptSpeakerDependent(cfg, si, o.speaker, train, valid,
                                       SpeakerSeed(seed, o.speaker), log);
  EnsureParent(o.out);
  SaveModel(o.out, r.model);
  Log(std::string(targeted ? "adapt-st" : "adapt-sd") + ": saved " + r.model.spec.Describe() +
      " to " + o.out);
  return 0;
}

int CmdDecode(const Options &o) {
  RequireFlag(o.model, "--model");
  RequireFlag(o.out, "--out");
  const ExperimentConfig cfg = ResolveConfig(o);
  const CorpusData data = LoadCorpus(cfg);
  const DnnModel model = LoadModel(o.model);
  PreparedSet set = PrepareSet(data, SplitIds(data, o.split), ParseConditionFlag(o.condition), cfg);
  if (o.speaker >= 0) set = SelectSpeaker(set, o.speaker);
  const DecodeGraph graph = BuildGraph(data.grammar, data.lexicon, cfg.decoder.self_loop_prob);
  const Evaluation ev = EvaluateModel(model, set, graph, cfg.decoder.use_priors);
  std::string hyp, ref;
  for (size_t i = 0; i < ev.utterances.size(); ++i) {
    hyp += ev.utterances[i].utt_id + " " + JoinWords(ev.utterances[i].hypothesis) + "\n";
    ref += set.utterances[i].utt_id + " " + JoinWords(set.utterances[i].transcript) + "\n";
  }
  EnsureParent(o.out);
  WriteFileBytes(o.out, hyp);
  if (!o.ref.empty()) {
    EnsureParent(o.ref);
    WriteFileBytes(o.ref, ref);
  }
  Log("decode: " + std::to_string(ev.utterances.size()) + " utterances, WER " +
      FormatPercent(ev.total.Wer()));
  return 0;
}

std::map<std::string, std::vector<std::string>> ReadTranscripts(const std::string &path) {
  std::map<std::string, std::vector<std::string>> out;
  int line_no = 0;
  for (const auto &line : ReadLines(path)) {
    ++line_no;
    std::vector<std::string> words = SplitWhitespace(line);
    if (words.empty()) continue;
    const std::string id = words.front();
    words.erase(words.begin());
    if (!out.emplace(id, std::move(words)).second)
      throw DataError(path + ":" + std::to_string(line_no) + ": duplicate utterance '" + id + "'");
  }
  return out;
}

int CmdScore(const Options &o) {
  RequireFlag(o.ref, "--ref");
  RequireFlag(o.hyp, "--hyp");
  const auto ref = ReadTranscripts(o.ref);
  const auto hyp = ReadTranscripts(o.hyp);
  if (ref.empty()) throw DataError(o.ref + ": no reference transcripts");
  for (const auto &[id, words] : hyp)
    if (!ref.count(id)) throw DataError(o.hyp + ": utterance '" + id + "' has no reference");
  WerReport total;
  for (const auto &[id, words] : ref) {
    auto it = hyp.find(id);
    total += ComputeWer(words, it == hyp.end() ? std::vector<std::string>() : it->second);
  }
  std::cout << "WER " << FormatPercent(total.Wer()) << " [ " << total.Errors() << " / "
            << total.reference_words << ", " << total.substitutions << " sub, "
            << total.deletions << " del, " << total.insertions << " ins ]\n";
  return 0;
}

int CmdMatrix(const Options &o) {
  RequireFlag(o.out, "--out");
  const ExperimentConfig cfg = ResolveConfig(o);
  RunOptions opts;
  if (const char *cache = std::getenv("AVST_CACHE_DIR")) opts.cache_dir = cache;
  opts.log = Log;
  const ExperimentReport report = RunMatrix(cfg, opts);
  WriteReport(o.out, report, cfg);
  std::cout << FormatReportText(report);
  Log("matrix: report written to " + o.out);
  return 0;
}

int Main(int argc, char **argv) {
  CLI::App app{"Audio-visual speaker-targeted acoustic modelling workbench"};
  app.require_subcommand(1);
  Options o;
  auto add_config = [&](CLI::App *c) {
    c->add_option("--config", o.config, "experiment config (JSON)")->check(CLI::ExistingFile);
    c->add_option("--seed", o.seed, "override the experiment seed");
  };
  auto add_corpus = [&](CLI::App *c) {
    c->add_option("--manifest", o.manifest, "utterance manifest (JSON lines)");
    c->add_option("--splits", o.splits, "splits file (JSON)");
    c->add_option("--grammar", o.grammar, "grammar file");
    c->add_option("--lexicon", o.lexicon, "lexicon file");
  };
  auto add_condition = [&](CLI::App *c) {
    c->add_option("--condition", o.condition, "one or two (speakers in the audio)");
  };

  CLI::App *synth = app.add_subcommand("synth", "generate the synthetic corpus and its splits");
  add_config(synth);
  synth->add_option("--out", o.out, "output directory");

  CLI::App *mix = app.add_subcommand("mix", "write two-speaker mixtures and their manifest");
  mix->add_option("--manifest", o.manifest, "clean manifest");
  mix->add_option("--splits", o.splits, "splits file");
  mix->add_option("--seed", o.seed, "pairing seed");
  mix->add_option("--gain", o.gain, "mixing gain");
  mix->add_option("--out", o.out, "output directory");

  CLI::App *features = app.add_subcommand("features", "extract stacked log-mel features");
  add_config(features);
  features->add_option("--manifest", o.manifest, "manifest");
  features->add_option("--out", o.out, "output directory");

  CLI::App *train_si = app.add_subcommand("train-si", "train a speaker-independent model");
  add_config(train_si);
  add_corpus(train_si);
  add_condition(train_si);
  train_si->add_option("--modality", o.modality, "a or av");
  train_si->add_option("--out", o.out, "output model file");

  CLI::App *adapt_st = app.add_subcommand("adapt-st", "speaker-targeted adaptation");
  add_config(adapt_st);
  add_corpus(adapt_st);
  add_condition(adapt_st);
  adapt_st->add_option("--model", o.model, "speaker-independent model");
  adapt_st->add_option("--variant", o.variant, "a, b or c");
  adapt_st->add_option("--out", o.out, "output model file");

  CLI::App *adapt_sd = app.add_subcommand("adapt-sd", "speaker-dependent adaptation");
  add_config(adapt_sd);
  add_corpus(adapt_sd);
  add_condition(adapt_sd);
  adapt_sd->add_option("--model", o.model, "speaker-independent model");
  adapt_sd->add_option("--speaker", o.speaker, "speaker id");
  adapt_sd->add_option("--out", o.out, "output model file");

  CLI::App *decode = app.add_subcommand("decode", "decode a split with a model");
  add_config(decode);
  add_corpus(decode);
  add_condition(decode);
  decode->add_option("--model", o.model, "model file");
  decode->add_option("--split", o.split, "train, valid or test");
  decode->add_option("--speaker", o.speaker, "only this speaker's utterances");
  decode->add_option("--out", o.out, "hypothesis file");
  decode->add_option("--ref", o.ref, "also write the reference transcripts here");

  CLI::App *score = app.add_subcommand("score", "word error rate of hypotheses");
  score->add_option("--ref", o.ref, "reference transcripts (utt_id words...)");
  score->add_option("--hyp", o.hyp, "hypothesis transcripts");

  CLI::App *matrix = app.add_subcommand("matrix", "run the experiment matrix");
  add_config(matrix);
  add_corpus(matrix);
  matrix->add_option("--out", o.out, "report directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return 1;
  }

  try {
    if (*synth) return CmdSynth(o);
    if (*mix) return CmdMix(o);
    if (*features) return CmdFeatures(o);
    if (*train_si) return CmdTrainSi(o);
    if (*adapt_st) return CmdAdapt(o, true);
    if (*adapt_sd) return CmdAdapt(o, false);
    if (*decode) return CmdDecode(o);
    if (*score) return CmdScore(o);
    if (*matrix) return CmdMatrix(o);
  } catch (const Error &e) {
    std::cerr << "avst: error: " << e.what() << std::endl;
    return e.ExitCode();
  } catch (const std::exception &e) {
    std::cerr << "avst: error: " << e.what() << std::endl;
    return 2;
  }
  return 1;
}

}  // namespace
}  // namespace avst

int main(int argc, char **argv) { return avst::Main(argc, argv); }

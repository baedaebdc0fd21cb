// src/pipeline/experiment.cc

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

#include "avst/pipeline/experiment.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/decoder/decode-graph.h"
#include "avst/nnet/model-io.h"
#include "avst/pipeline/training.h"
#include "json.hpp"

namespace avst {

using Json = nlohmann::ordered_json;

const CellResult *ExperimentReport::Find(const Cell &cell) const {
  for (const auto &c : cells)
    if (c.cell == cell) return &c;
  return nullptr;
}

uint64_t CellSeed(const ExperimentConfig &cfg, const Cell &cell) {
  return DeriveSeed(cfg.seed, cell.Name());
}

uint64_t SpeakerSeed(uint64_t cell_seed, int speaker_id) {
  return DeriveSeed(cell_seed, static_cast<uint64_t>(speaker_id));
}

std::vector<int> SdSpeakers(const ExperimentConfig &cfg, const CorpusData &data) {
  std::vector<int> out = cfg.sd_speakers;
  if (out.empty())
    for (int s = 0; s < data.manifest.num_speakers; ++s) out.push_back(s);
  for (int s : out)
    if (s >= data.manifest.num_speakers)
      throw UsageError("sd_speakers: speaker " + std::to_string(s) + " is not in the corpus");
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace {

std::string Hex(uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Cache key for prepared features: only the fields that shape them.
std::string FeatureKey(const ExperimentConfig &cfg, const std::string &split, Condition c) {
  ExperimentConfig k;
  k.corpus = cfg.corpus;
  k.split_ratios = cfg.split_ratios;
  k.split_seed = cfg.split_seed;
  k.mixture_seed = cfg.mixture_seed;
  k.mixture_gain = cfg.mixture_gain;
  k.logmel = cfg.logmel;
  k.context_radius = cfg.context_radius;
  return "feat-" + split + "-" + ConditionName(c) + "-" +
         Hex(Fnv1a64(FormatExperimentConfig(k)));
}

std::string ModelKey(const ExperimentConfig &cfg, const std::string &model_name) {
  ExperimentConfig k = cfg;
  k.cells.clear();
  k.sd_speakers.clear();
  std::string name = model_name;
  std::replace(name.begin(), name.end(), '/', '_');
  return "model-" + name + "-" + Hex(Fnv1a64(FormatExperimentConfig(k) + "|" + model_name));
}

Json TraceJson(const ModelTrace &t) {
  Json j;
  j["name"] = t.name;
  j["seed"] = t.seed;
  j["best_epoch"] = t.best_epoch;
  j["initial_valid_loss"] = t.initial_valid_loss;
  Json curve = Json::array();
  for (const auto &e : t.curve)
    curve.push_back({e.epoch, e.train_loss, e.valid_loss, e.valid_accuracy});
  j["curve"] = curve;
  return j;
}

ModelTrace TraceFromJson(const Json &j) {
  ModelTrace t;
  t.name = j.at("name").get<std::string>();
  t.seed = j.at("seed").get<uint64_t>();
  t.best_epoch = j.at("best_epoch").get<int>();
  t.initial_valid_loss = j.at("initial_valid_loss").get<double>();
  for (const auto &e : j.at("curve"))
    t.curve.push_back(EpochStats{e.at(0).get<int>(), e.at(1).get<double>(),
                                 e.at(2).get<double>(), e.at(3).get<double>()});
  return t;
}

struct TrainedModel {
  DnnModel model;
  ModelTrace trace;
};

class MatrixRunner {
 public:
  MatrixRunner(const ExperimentConfig &cfg, const CorpusData &data, const RunOptions &opts)
      : cfg_(cfg), data_(data), opts_(opts),
        graph_(BuildGraph(data.grammar, data.lexicon, cfg.decoder.self_loop_prob)) {
    if (!opts_.cache_dir.empty()) std::filesystem::create_directories(opts_.cache_dir);
  }

  ExperimentReport Run() {
    const std::vector<Cell> requested = cfg_.ResolvedCells();
    std::set<std::string> wanted;
    for (const Cell &c : requested) wanted.insert(c.Name());

    ExperimentReport report;
    report.config_hash = ConfigHash(cfg_);
    report.num_speakers = data_.manifest.num_speakers;
    // FullMatrix order puts every SI cell before its adaptations.
    for (const Cell &cell : FullMatrix()) {
      if (!wanted.count(cell.Name())) continue;
      report.cells.push_back(RunCell(cell));
    }
    return report;
  }

 private:
  void Log(const std::string &msg) const {
    if (opts_.log) opts_.log(msg);
  }

  const PreparedSet &Set(const std::string &split, Condition c) {
    const std::string key = split + "/" + ConditionName(c);
    auto it = sets_.find(key);
    if (it != sets_.end()) return it->second;
    const std::vector<std::string> &ids = split == "train"   ? data_.splits.train
                                          : split == "valid" ? data_.splits.valid
                                                             : data_.splits.test;
    const std::string cache =
        opts_.cache_dir.empty() ? "" : opts_.cache_dir + "/" + FeatureKey(cfg_, split, c) + ".pset";
    PreparedSet set;
    if (!cache.empty() && std::filesystem::exists(cache)) {
      Log("features: reusing " + cache);
      set = ReadPreparedSet(cache);
    } else if (ids.empty()) {
      if (split == "train") throw DataError("the train split is empty");
      set.frames.num_speakers = data_.manifest.num_speakers;
    } else {
      Log("features: preparing " + key + " (" + std::to_string(ids.size()) + " utterances)");
      set = PrepareSet(data_, ids, c, cfg_);
      if (!cache.empty()) WritePreparedSet(cache, set);
    }
    return sets_.emplace(key, std::move(set)).first->second;
  }

  template <typename TrainFn>
  TrainedModel Trained(const std::string &name, uint64_t seed, TrainFn train) {
    const std::string base =
        opts_.cache_dir.empty() ? "" : opts_.cache_dir + "/" + ModelKey(cfg_, name);
    if (!base.empty() && std::filesystem::exists(base + ".dnnm") &&
        std::filesystem::exists(base + ".json")) {
      Log("model " + name + ": reusing " + base + ".dnnm");
      return TrainedModel{LoadModel(base + ".dnnm"),
                          TraceFromJson(Json::parse(ReadFileBytes(base + ".json")))};
    }
    Log("model " + name + ": training");
    auto logger = [&](const EpochStats &e) {
      char buf[160];
      std::snprintf(buf, sizeof(buf), "model %s: epoch %d train_loss %.4f valid_loss %.4f valid_acc %.4f",
                    name.c_str(), e.epoch, e.train_loss, e.valid_loss, e.valid_accuracy);
      Log(buf);
    };
    TrainResult r = train(logger);
    TrainedModel out{std::move(r.model),
                     ModelTrace{name, seed, r.best_epoch, r.initial_valid_loss, r.curve}};
    if (!base.empty()) {
      SaveModel(base + ".dnnm", out.model);
      WriteFileBytes(base + ".json", TraceJson(out.trace).dump() + "\n");
    }
    return out;
  }

  const TrainedModel &SiModel(const Cell &si_cell) {
    const std::string name = si_cell.Name();
    auto it = si_models_.find(name);
    if (it != si_models_.end()) return it->second;
    const uint64_t seed = CellSeed(cfg_, si_cell);
    const PreparedSet &train = Set("train", si_cell.condition);
    const PreparedSet &valid = Set("valid", si_cell.condition);
    TrainedModel m = Trained(name, seed, [&](const EpochLogger &log) {
      return TrainSpeakerIndependent(cfg_, data_, train, valid, si_cell.modality, seed, log);
    });
    return si_models_.emplace(name, std::move(m)).first->second;
  }

  CellResult RunCell(const Cell &cell) {
    CellResult result;
    result.cell = cell;
    result.seed = CellSeed(cfg_, cell);
    const PreparedSet &train = Set("train", cell.condition);
    const PreparedSet &valid = Set("valid", cell.condition);
    const PreparedSet &test = Set("test", cell.condition);
    if (test.frames.NumFrames() == 0) throw DataError("the test split is empty");
    const bool priors = cfg_.decoder.use_priors;

    if (cell.kind == ModelKind::kSI) {
      const TrainedModel &si = SiModel(cell);
      result.models.push_back(si.trace);
      result.eval = EvaluateModel(si.model, test, graph_, priors);
    } else if (cell.kind == ModelKind::kSD) {
      const TrainedModel &si = SiModel(cell.Parent());
      for (int s : SdSpeakers(cfg_, data_)) {
        const std::string name = cell.Name() + "/" + std::to_string(s);
        const uint64_t seed = SpeakerSeed(result.seed, s);
        TrainedModel m = Trained(name, seed, [&](const EpochLogger &log) {
          return AdaptSpeakerDependent(cfg_, si.model, s, train, valid, seed, log);
        });
        result.models.push_back(m.trace);
        const PreparedSet own_test = SelectSpeaker(test, s);
        if (own_test.utterances.empty())
          throw DataError("speaker " + std::to_string(s) + " has no test utterances");
        result.eval.Merge(EvaluateModel(m.model, own_test, graph_, priors));
      }
    } else {
      const TrainedModel &si = SiModel(cell.Parent());
      TrainedModel m = Trained(cell.Name(), result.seed, [&](const EpochLogger &log) {
        return AdaptSpeakerTargeted(cfg_, data_, si.model, KindVariant(cell.kind), train, valid,
                                    result.seed, log);
      });
      result.models.push_back(m.trace);
      result.eval = EvaluateModel(m.model, test, graph_, priors);
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf), "cell %s: WER %.1f%% frame accuracy %.1f%%",
                  cell.Name().c_str(), 100.0 * result.eval.total.Wer(),
                  100.0 * result.eval.FrameAccuracy());
    Log(buf);
    return result;
  }

  const ExperimentConfig &cfg_;
  const CorpusData &data_;
  const RunOptions &opts_;
  DecodeGraph graph_;
  std::map<std::string, PreparedSet> sets_;
  std::map<std::string, TrainedModel> si_models_;
};

double Round(double x, double scale) { return std::round(x * scale) / scale; }

double WerPercent(const WerReport &w) { return Round(100.0 * w.Wer(), 10.0); }

std::string KindLabel(ModelKind k) {
  switch (k) {
    case ModelKind::kSI: return "speaker-independent";
    case ModelKind::kSTA: return "speaker-targeted A";
    case ModelKind::kSTB: return "speaker-targeted B";
    case ModelKind::kSTC: return "speaker-targeted C";
    case ModelKind::kSD: return "speaker-dependent";
  }
  return "?";
}

}  // namespace

ExperimentReport RunMatrix(const ExperimentConfig &cfg, const CorpusData &data,
                           const RunOptions &opts) {
  cfg.Validate();
  MatrixRunner runner(cfg, data, opts);
  return runner.Run();
}

ExperimentReport RunMatrix(const ExperimentConfig &cfg, const RunOptions &opts) {
  const CorpusData data = LoadCorpus(cfg);
  return RunMatrix(cfg, data, opts);
}

std::string FormatReportText(const ExperimentReport &report) {
  std::string out = "experiment " + report.config_hash + "\n";
  char buf[256];
  for (Condition cond : {Condition::kTwoSpeaker, Condition::kOneSpeaker}) {
    bool any = false;
    for (const auto &c : report.cells) any = any || c.cell.condition == cond;
    if (!any) continue;
    out += "\n";
    out += cond == Condition::kTwoSpeaker ? "Two-speaker test set\n" : "One-speaker test set\n";
    std::snprintf(buf, sizeof(buf), "%-22s %12s %12s %12s %12s\n", "model", "WER A (%)",
                  "WER AV (%)", "frames A (%)", "frames AV (%)");
    out += buf;
    for (ModelKind k : {ModelKind::kSI, ModelKind::kSTA, ModelKind::kSTB, ModelKind::kSTC,
                        ModelKind::kSD}) {
      const CellResult *a = report.Find(Cell{k, Modality::kA, cond});
      const CellResult *av = report.Find(Cell{k, Modality::kAV, cond});
      if (!a && !av) continue;
      auto wer = [](const CellResult *c) {
        char b[32];
        if (!c) return std::string("-");
        std::snprintf(b, sizeof(b), "%.1f", WerPercent(c->eval.total));
        return std::string(b);
      };
      auto acc = [](const CellResult *c) {
        char b[32];
        if (!c) return std::string("-");
        std::snprintf(b, sizeof(b), "%.1f", Round(100.0 * c->eval.FrameAccuracy(), 10.0));
        return std::string(b);
      };
      std::snprintf(buf, sizeof(buf), "%-22s %12s %12s %12s %12s\n", KindLabel(k).c_str(),
                    wer(a).c_str(), wer(av).c_str(), acc(a).c_str(), acc(av).c_str());
      out += buf;
    }
  }
  out += "\nPer-speaker WER (%)\n";
  std::snprintf(buf, sizeof(buf), "%-14s", "cell");
  out += buf;
  for (int s = 0; s < report.num_speakers; ++s) {
    std::snprintf(buf, sizeof(buf), " %6s", ("s" + std::to_string(s)).c_str());
    out += buf;
  }
  out += "\n";
  for (const auto &c : report.cells) {
    std::snprintf(buf, sizeof(buf), "%-14s", c.cell.Name().c_str());
    out += buf;
    for (int s = 0; s < report.num_speakers; ++s) {
      auto it = c.eval.per_speaker.find(s);
      if (it == c.eval.per_speaker.end())
        std::snprintf(buf, sizeof(buf), " %6s", "-");
      else
        std::snprintf(buf, sizeof(buf), " %6.1f", WerPercent(it->second));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

std::string FormatReportJson(const ExperimentReport &report) {
  Json j;
  j["config_hash"] = report.config_hash;
  j["num_speakers"] = report.num_speakers;
  Json cells = Json::array();
  for (const auto &c : report.cells) {
    const WerReport &w = c.eval.total;
    Json cj;
    cj["cell"] = c.cell.Name();
    cj["seed"] = c.seed;
    cj["wer"] = WerPercent(w);
    cj["substitutions"] = w.substitutions;
    cj["deletions"] = w.deletions;
    cj["insertions"] = w.insertions;
    cj["reference_words"] = w.reference_words;
    cj["frame_accuracy"] = Round(c.eval.FrameAccuracy(), 1e4);
    Json per = Json::array();
    for (const auto &[s, sw] : c.eval.per_speaker)
      per.push_back({{"speaker", s},
                     {"wer", WerPercent(sw)},
                     {"errors", sw.Errors()},
                     {"reference_words", sw.reference_words}});
    cj["per_speaker"] = per;
    Json models = Json::array();
    for (const auto &m : c.models) {
      Json mj;
      mj["name"] = m.name;
      mj["seed"] = m.seed;
      mj["best_epoch"] = m.best_epoch;
      mj["initial_valid_loss"] = Round(m.initial_valid_loss, 1e6);
      Json curve = Json::array();
      for (const auto &e : m.curve)
        curve.push_back({{"epoch", e.epoch},
                         {"train_loss", Round(e.train_loss, 1e6)},
                         {"valid_loss", Round(e.valid_loss, 1e6)},
                         {"valid_accuracy", Round(e.valid_accuracy, 1e4)}});
      mj["curve"] = curve;
      models.push_back(mj);
    }
    cj["models"] = models;
    Json utts = Json::array();
    for (const auto &u : c.eval.utterances)
      utts.push_back({{"utt_id", u.utt_id},
                      {"speaker", u.speaker_id},
                      {"substitutions", u.wer.substitutions},
                      {"deletions", u.wer.deletions},
                      {"insertions", u.wer.insertions},
                      {"reference_words", u.wer.reference_words},
                      {"hypothesis", u.hypothesis}});
    cj["utterances"] = utts;
    cells.push_back(cj);
  }
  j["cells"] = cells;
  return j.dump(1) + "\n";
}

void WriteReport(const std::string &dir, const ExperimentReport &report,
                 const ExperimentConfig &cfg) {
  std::filesystem::create_directories(dir);
  WriteFileBytes(dir + "/report.txt", FormatReportText(report));
  WriteFileBytes(dir + "/report.json", FormatReportJson(report));
  WriteFileBytes(dir + "/config.resolved.json", FormatExperimentConfig(cfg));
}

}  // namespace avst

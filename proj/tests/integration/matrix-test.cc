// tests/integration/matrix-test.cc

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

// End-to-end runs of a shrunken experiment matrix.

#include <filesystem>
#include <fstream>
#include <sstream>

#include "avst/base/error.h"
#include "avst/nnet/train.h"
#include "avst/pipeline/corpus-data.h"
#include "avst/pipeline/experiment.h"
#include "avst/pipeline/training.h"
#include "doctest.h"

namespace avst {
namespace {

namespace fs = std::filesystem;

ExperimentConfig TinyMatrix() {
  ExperimentConfig cfg = DefaultSyntheticExperiment();
  cfg.corpus.synthetic->num_speakers = 3;
  cfg.corpus.synthetic->utterances_per_speaker = 24;
  cfg.architecture.hidden_width = 24;
  cfg.train.max_epochs = 4;
  cfg.adapt.max_epochs = 3;
  for (const char *name : {"si/a/one", "si/a/two", "si/av/two", "st-a/a/two", "st-b/av/two",
                           "st-c/a/two", "sd/a/two", "sd/av/two"})
    cfg.cells.push_back(ParseCell(name));
  cfg.sd_speakers = {0, 2};
  return cfg;
}

const CorpusData &TinyCorpus() {
  static const CorpusData data = LoadCorpus(TinyMatrix());
  return data;
}

const ExperimentReport &TinyReport() {
  static const ExperimentReport report = RunMatrix(TinyMatrix(), TinyCorpus());
  return report;
}

const ModelTrace &FindTrace(const CellResult &cell, const std::string &name) {
  for (const auto &m : cell.models)
    if (m.name == name) return m;
  throw DataError("no model trace " + name);
}

double BestValidLoss(const ModelTrace &t) {
  return t.best_epoch == 0 ? t.initial_valid_loss : t.curve[t.best_epoch - 1].valid_loss;
}

std::string ReadFile(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("matrix runs every requested cell") {
  const ExperimentReport &r = TinyReport();
  CHECK(r.cells.size() == 8);
  CHECK(r.num_speakers == 3);
  for (const CellResult &c : r.cells) {
    INFO(c.cell.Name());
    CHECK(c.eval.total.reference_words > 0);
    CHECK(c.eval.total.Wer() >= 0.0);
    CHECK(!c.models.empty());
  }
  CHECK(r.Find(ParseCell("st-a/av/two")) == nullptr);
  const std::string text = FormatReportText(r);
  CHECK(text.find("speaker-targeted B") != std::string::npos);
  CHECK(text.find("One-speaker test set") != std::string::npos);
}

TEST_CASE("matrix is deterministic") {
  const ExperimentReport again = RunMatrix(TinyMatrix(), TinyCorpus());
  CHECK(FormatReportJson(again) == FormatReportJson(TinyReport()));
  CHECK(FormatReportText(again) == FormatReportText(TinyReport()));
}

TEST_CASE("caches do not change results") {
  const fs::path dir = fs::temp_directory_path() / "avst-matrix-cache";
  fs::remove_all(dir);
  RunOptions opts;
  opts.cache_dir = dir.string();
  const ExperimentReport cold = RunMatrix(TinyMatrix(), TinyCorpus(), opts);
  int cached = 0;
  for (const auto &e : fs::directory_iterator(dir))
    cached += e.path().extension() == ".pset" || e.path().extension() == ".dnnm";
  CHECK(cached > 5);
  std::vector<std::string> hits;
  opts.log = [&](const std::string &line) { hits.push_back(line); };
  const ExperimentReport warm = RunMatrix(TinyMatrix(), TinyCorpus(), opts);
  bool reused = false;
  for (const auto &h : hits) reused |= h.find("reusing") != std::string::npos;
  CHECK(reused);
  CHECK(FormatReportJson(cold) == FormatReportJson(TinyReport()));
  CHECK(FormatReportJson(warm) == FormatReportJson(TinyReport()));

  const fs::path out_a = dir / "a", out_b = dir / "b";
  WriteReport(out_a.string(), cold, TinyMatrix());
  WriteReport(out_b.string(), warm, TinyMatrix());
  for (const char *f : {"report.txt", "report.json", "config.resolved.json"})
    CHECK(ReadFile(out_a / f) == ReadFile(out_b / f));
  fs::remove_all(dir);
}

TEST_CASE("speaker-targeted models start from the parent's loss") {
  const ExperimentReport &r = TinyReport();
  const CellResult &si = *r.Find(ParseCell("si/a/two"));
  const CellResult &st = *r.Find(ParseCell("st-a/a/two"));
  const ModelTrace &parent = FindTrace(si, "si/a/two");
  const ModelTrace &child = FindTrace(st, "st-a/a/two");
  CHECK(child.initial_valid_loss == BestValidLoss(parent));
  // Variant C on audio keeps four layers and so preserves outputs too.
  const ModelTrace &c = FindTrace(*r.Find(ParseCell("st-c/a/two")), "st-c/a/two");
  CHECK(c.initial_valid_loss == BestValidLoss(parent));
}

TEST_CASE("speaker-dependent cells cover only the requested speakers") {
  const CellResult &sd = *TinyReport().Find(ParseCell("sd/a/two"));
  CHECK(sd.models.size() == 2);
  CHECK(sd.eval.per_speaker.size() == 2);
  CHECK(sd.eval.per_speaker.count(0) == 1);
  CHECK(sd.eval.per_speaker.count(2) == 1);
  for (const auto &u : sd.eval.utterances) CHECK(u.speaker_id != 1);
}

TEST_CASE("speaker-dependent training ignores other speakers' frames") {
  const ExperimentConfig cfg = TinyMatrix();
  const CorpusData &data = TinyCorpus();
  const PreparedSet train = PrepareSet(data, data.splits.train, Condition::kTwoSpeaker, cfg);
  const PreparedSet valid = PrepareSet(data, data.splits.valid, Condition::kTwoSpeaker, cfg);
  const TrainResult si =
      TrainSpeakerIndependent(cfg, data, train, valid, Modality::kA, 5);
  PreparedSet scrambled = train;
  for (int f = 0; f < scrambled.frames.NumFrames(); ++f)
    if (scrambled.frames.speaker[f] != 1) {
      scrambled.frames.label[f] = (scrambled.frames.label[f] + 1) % data.num_phonemes;
      scrambled.frames.acoustic.row(f).setZero();
    }
  const TrainResult a = AdaptSpeakerDependent(cfg, si.model, 1, train, valid, 6);
  const TrainResult b = AdaptSpeakerDependent(cfg, si.model, 1, scrambled, valid, 6);
  CHECK(a.model.params.output.weight == b.model.params.output.weight);
  CHECK(a.model.params.hidden[0].weight == b.model.params.hidden[0].weight);
  CHECK(a.model.spec == si.model.spec);
  CHECK(a.model.provenance == "sd:1");
  CHECK_THROWS_AS(AdaptSpeakerDependent(cfg, si.model, 7, train, valid, 6), DataError);
}

TEST_CASE("audio-visual models see the stacked visual input") {
  const CellResult &av = *TinyReport().Find(ParseCell("si/av/two"));
  CHECK(av.eval.total.reference_words > 0);
  const ArchitectureSpec spec = SiArchitecture(TinyMatrix(), TinyCorpus(), Modality::kAV);
  CHECK(spec.BatchInputDim() == 2240);
  const CellResult &stb = *TinyReport().Find(ParseCell("st-b/av/two"));
  CHECK(FindTrace(stb, "st-b/av/two").curve.size() >= 1);
}

}  // namespace avst

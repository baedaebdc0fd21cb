// src/pipeline/pipeline-test.cc

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

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/decoder/decode-graph.h"
#include "avst/pipeline/corpus-data.h"
#include "avst/pipeline/evaluation.h"
#include "avst/pipeline/experiment-config.h"
#include "avst/pipeline/experiment.h"
#include "avst/pipeline/training.h"
#include "doctest.h"

namespace avst {
namespace {

ExperimentConfig SmallConfig() {
  ExperimentConfig cfg = DefaultSyntheticExperiment();
  cfg.corpus.synthetic->num_speakers = 3;
  cfg.corpus.synthetic->utterances_per_speaker = 10;
  return cfg;
}

const CorpusData &SmallCorpus() {
  static const CorpusData data = LoadCorpus(SmallConfig());
  return data;
}

const PreparedSet &SmallTestSet() {
  static const PreparedSet set =
      PrepareSet(SmallCorpus(), SmallCorpus().splits.test, Condition::kTwoSpeaker, SmallConfig());
  return set;
}

FeatureMatrix OneHotPosteriors(const FrameDataset &d, int labels) {
  FeatureMatrix p = FeatureMatrix::Constant(d.NumFrames(), labels, 1e-4);
  for (int t = 0; t < d.NumFrames(); ++t) p(t, d.label[t]) = 1.0;
  for (int t = 0; t < d.NumFrames(); ++t) p.row(t) /= p.row(t).sum();
  return p;
}

}  // namespace

TEST_CASE("cells") {
  const std::vector<Cell> all = FullMatrix();
  CHECK(all.size() == 20);
  std::set<std::string> names;
  for (const Cell &c : all) {
    names.insert(c.Name());
    CHECK(ParseCell(c.Name()) == c);
    CHECK(c.Parent().kind == ModelKind::kSI);
    CHECK(c.Parent().modality == c.modality);
  }
  CHECK(names.size() == 20);
  const Cell c = ParseCell("st-b/av/two");
  CHECK(c.kind == ModelKind::kSTB);
  CHECK(c.modality == Modality::kAV);
  CHECK(c.condition == Condition::kTwoSpeaker);
  CHECK(KindVariant(ModelKind::kSTC) == FusionVariant::kC);
  CHECK(KindVariant(ModelKind::kSD) == FusionVariant::kNone);
  CHECK_THROWS_AS(ParseCell("st-a/ai/two"), UsageError);
  CHECK_THROWS_AS(ParseCell("st-d/a/two"), UsageError);
  CHECK_THROWS_AS(ParseCell("si/a"), UsageError);
  CHECK_THROWS_AS(ParseCell("si/a/three"), UsageError);

  const ExperimentConfig cfg = DefaultSyntheticExperiment();
  std::set<uint64_t> seeds;
  for (const Cell &cell : all) seeds.insert(CellSeed(cfg, cell));
  CHECK(seeds.size() == 20);
  CHECK(SpeakerSeed(5, 0) != SpeakerSeed(5, 1));
  CHECK(SpeakerSeed(5, 0) == SpeakerSeed(5, 0));
}

TEST_CASE("experiment config files") {
  const ExperimentConfig def = DefaultSyntheticExperiment();
  const std::string text = FormatExperimentConfig(def);
  const ExperimentConfig back = ParseExperimentConfig(text, "cfg.json", ".");
  CHECK(FormatExperimentConfig(back) == text);
  CHECK(ConfigHash(back) == ConfigHash(def));
  CHECK(ConfigHash(def).size() == 16);

  const ExperimentConfig partial = ParseExperimentConfig(
      R"({"seed": 3, "train": {"learning_rate": 0.05}, "cells": ["si/a/two", "sd/av/one"]})",
      "partial.json", ".");
  CHECK(partial.seed == 3);
  CHECK(partial.train.learning_rate == 0.05);
  CHECK(partial.train.batch_size == def.train.batch_size);
  REQUIRE(partial.ResolvedCells().size() == 2);
  CHECK(partial.ResolvedCells()[1].Name() == "sd/av/one");
  CHECK(ConfigHash(partial) != ConfigHash(def));

  try {
    ParseExperimentConfig(R"({"train": {"learning_rat": 0.1}})", "typo.json", ".");
    FAIL("expected an error");
  } catch (const UsageError &e) {
    CHECK(std::string(e.what()).find("train.learning_rat") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseExperimentConfig(R"({"seed": "one"})", "t.json", "."), UsageError);
  CHECK_THROWS_AS(ParseExperimentConfig("{", "t.json", "."), UsageError);
  CHECK_THROWS_AS(ParseExperimentConfig(R"({"decoder": {"self_loop_prob": 1.5}})", "t.json", "."),
                  UsageError);
  CHECK_THROWS_AS(ParseExperimentConfig(R"({"cells": ["si/a/two", "si/a/two"]})", "t.json", "."),
                  UsageError);
  CHECK_THROWS_AS(ParseExperimentConfig(R"({"splits": {"train": 0.9, "valid": 0.2}})", "t.json",
                                        "."),
                  UsageError);

  const ExperimentConfig with_manifest = ParseExperimentConfig(
      R"({"corpus": {"manifest": "m.jsonl", "grammar": "g.txt", "lexicon": "/abs/l.txt"}})",
      "m.json", "/data/run");
  CHECK(!with_manifest.corpus.synthetic);
  CHECK(with_manifest.corpus.manifest == "/data/run/m.jsonl");
  CHECK(with_manifest.corpus.lexicon == "/abs/l.txt");
  CHECK_THROWS_AS(
      ParseExperimentConfig(R"({"corpus": {"manifest": "m.jsonl"}})", "m.json", "/data"),
      UsageError);
}

TEST_CASE("corpus loading and prepared sets") {
  const CorpusData &data = SmallCorpus();
  CHECK(data.manifest.num_speakers == 3);
  CHECK(data.has_visual);
  CHECK(data.num_phonemes == 6);
  const ExperimentConfig cfg = SmallConfig();
  const PreparedSet &set = SmallTestSet();
  REQUIRE(set.utterances.size() == data.splits.test.size());
  int total = 0;
  for (size_t i = 0; i < set.utterances.size(); ++i) {
    const PreparedUtterance &u = set.utterances[i];
    CHECK(u.first_frame == total);
    CHECK(u.num_frames == AlignmentLength(data.Get(u.utt_id).alignment));
    CHECK(data.Get(u.background).speaker_id != u.speaker_id);
    for (int t = 0; t < u.num_frames; ++t) {
      REQUIRE(set.frames.utterance[u.first_frame + t] == static_cast<int>(i));
      REQUIRE(set.frames.speaker[u.first_frame + t] == u.speaker_id);
    }
    CHECK(set.frames.label[u.first_frame] == data.Get(u.utt_id).alignment.front().phoneme);
    total += u.num_frames;
  }
  CHECK(set.frames.NumFrames() == total);
  CHECK(set.frames.acoustic.cols() == cfg.logmel.num_bins * (2 * cfg.context_radius + 1));
  CHECK(set.frames.visual.cols() == 1800);
  CHECK(*std::max_element(set.frames.visual_row.begin(), set.frames.visual_row.end()) <
        set.frames.visual.rows());

  const PreparedSet again =
      PrepareSet(data, data.splits.test, Condition::kTwoSpeaker, cfg);
  CHECK(again.frames.acoustic == set.frames.acoustic);
  const PreparedSet clean = PrepareSet(data, data.splits.test, Condition::kOneSpeaker, cfg);
  CHECK(clean.utterances[0].background.empty());
  CHECK(clean.frames.acoustic != set.frames.acoustic);
  CHECK(clean.frames.label == set.frames.label);

  CHECK_THROWS_AS(PrepareSet(data, {}, Condition::kOneSpeaker, cfg), DataError);
}

TEST_CASE("prepared set files") {
  namespace fs = std::filesystem;
  const fs::path path = fs::temp_directory_path() / "avst-pipeline-test.pset";
  const PreparedSet &set = SmallTestSet();
  WritePreparedSet(path.string(), set);
  const PreparedSet back = ReadPreparedSet(path.string());
  CHECK(back.frames.acoustic == set.frames.acoustic);
  CHECK(back.frames.visual == set.frames.visual);
  CHECK(back.frames.visual_row == set.frames.visual_row);
  CHECK(back.frames.label == set.frames.label);
  CHECK(back.frames.speaker == set.frames.speaker);
  CHECK(back.frames.utterance == set.frames.utterance);
  CHECK(back.frames.num_speakers == set.frames.num_speakers);
  REQUIRE(back.utterances.size() == set.utterances.size());
  for (size_t i = 0; i < set.utterances.size(); ++i) {
    CHECK(back.utterances[i].utt_id == set.utterances[i].utt_id);
    CHECK(back.utterances[i].background == set.utterances[i].background);
    CHECK(back.utterances[i].transcript == set.utterances[i].transcript);
  }
  { std::ofstream(path, std::ios::app) << 'x'; }
  CHECK_THROWS_AS(ReadPreparedSet(path.string()), DataError);
  fs::remove(path);
}

TEST_CASE("speaker selection") {
  const PreparedSet &set = SmallTestSet();
  int frames = 0;
  for (int s = 0; s < 3; ++s) {
    const PreparedSet one = SelectSpeaker(set, s);
    for (int sp : one.frames.speaker) REQUIRE(sp == s);
    for (size_t i = 0; i < one.utterances.size(); ++i) {
      const PreparedUtterance &u = one.utterances[i];
      for (int t = 0; t < u.num_frames; ++t)
        REQUIRE(one.frames.utterance[u.first_frame + t] == static_cast<int>(i));
    }
    frames += one.frames.NumFrames();
  }
  CHECK(frames == set.frames.NumFrames());
}

TEST_CASE("evaluation") {
  const CorpusData &data = SmallCorpus();
  const PreparedSet &set = SmallTestSet();
  const DecodeGraph graph = BuildGraph(data.grammar, data.lexicon);
  const Evaluation perfect =
      EvaluatePosteriors(set, OneHotPosteriors(set.frames, data.num_phonemes), graph, std::nullopt);
  CHECK(perfect.total.Errors() == 0);
  CHECK(perfect.total.reference_words == 3 * static_cast<int>(set.utterances.size()));
  CHECK(perfect.FrameAccuracy() == 1.0);
  CHECK(perfect.utterances.size() == set.utterances.size());

  Rng rng(1);
  FeatureMatrix noisy(set.frames.NumFrames(), data.num_phonemes);
  for (Eigen::Index i = 0; i < noisy.size(); ++i) noisy(i) = UniformUnit(rng) + 1e-3;
  for (Eigen::Index t = 0; t < noisy.rows(); ++t) noisy.row(t) /= noisy.row(t).sum();
  const Eigen::VectorXd priors = Eigen::VectorXd::Constant(data.num_phonemes, 1.0 / data.num_phonemes);
  const Evaluation e = EvaluatePosteriors(set, noisy, graph, priors);
  CHECK(e.total.Errors() > 0);
  double weighted = 0.0;
  int words = 0;
  for (const auto &[s, w] : e.per_speaker) {
    weighted += w.Wer() * w.reference_words;
    words += w.reference_words;
  }
  CHECK(words == e.total.reference_words);
  CHECK(std::abs(weighted / words - e.total.Wer()) <= 1e-9);

  Evaluation merged;
  for (int s = 0; s < 3; ++s) {
    const PreparedSet one = SelectSpeaker(set, s);
    merged.Merge(EvaluatePosteriors(
        one, OneHotPosteriors(one.frames, data.num_phonemes), graph, std::nullopt));
  }
  CHECK(merged.total == perfect.total);
  CHECK(merged.frames == perfect.frames);

  CHECK_THROWS_AS(EvaluatePosteriors(set, noisy.topRows(5), graph, std::nullopt), DataError);
}

TEST_CASE("model construction for each cell kind") {
  const CorpusData &data = SmallCorpus();
  ExperimentConfig cfg = SmallConfig();
  const ArchitectureSpec a = SiArchitecture(cfg, data, Modality::kA);
  CHECK(a.acoustic_dim == 440);
  CHECK(a.BatchInputDim() == 440);
  CHECK(a.output_labels == 6);
  const ArchitectureSpec av = SiArchitecture(cfg, data, Modality::kAV);
  CHECK(av.BatchInputDim() == 2240);
  CHECK(IdentityDim(cfg, data) == 3);
  cfg.architecture.identity_dim = 34;
  CHECK(IdentityDim(cfg, data) == 34);
}

}  // namespace avst

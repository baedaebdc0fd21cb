// tests/acceptance/acceptance.cc

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

// Acceptance gate.  Prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.  Pass a criterion number to run only that one.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "avst/base/random.h"
#include "avst/corpus/mixing.h"
#include "avst/decoder/wer.h"
#include "avst/dsp/assemble.h"
#include "avst/dsp/log-mel.h"
#include "avst/nnet/dnn.h"
#include "avst/pipeline/corpus-data.h"
#include "avst/pipeline/experiment.h"
#include "nnet-checks.h"
#include "oracles.h"

namespace avst {
namespace {

namespace fs = std::filesystem;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string Fmt(const char *format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, a, b, c);
  return buf;
}

// 1. Backprop against central differences for all eight architectures.
Outcome Gradients() {
  double worst = 0.0;
  long checked = 0;
  for (const auto &[m, v] : testing::AllArchitectures()) {
    const testing::GradientReport r = testing::CheckGradients(testing::ToySpec(m, v), 41);
    worst = std::max(worst, r.max_rel_error);
    checked += r.num_checked;
  }
  return {worst < 1e-4, Fmt("max relative error %.2e over %.0f parameters", worst, checked)};
}

// 2. Identity extension keeps the parent's outputs.
Outcome Extension() {
  double worst = 0.0, agreement = 1.0;
  for (Modality base : {Modality::kA, Modality::kAV}) {
    const DnnModel si =
        InitModel<float>(testing::ToySpec(base, FusionVariant::kNone, 64, 6), 51);
    for (FusionVariant v : {FusionVariant::kA, FusionVariant::kB, FusionVariant::kC}) {
      IdentityExtension ext;
      ext.variant = v;
      ext.num_speakers = 34;
      ext.seed = 52;
      worst = std::max<double>(worst, testing::ExtensionMaxAbsDiff(si, ext, 1000, 53));
      if (base == Modality::kAV) {
        ext.append_hidden_layer = true;
        agreement = std::min(agreement, testing::ExtensionArgmaxAgreement(si, ext, 1000, 54));
      }
    }
  }
  return {worst == 0.0 && agreement >= 0.99,
          Fmt("4-layer max abs diff %.3g, 5-layer AV argmax agreement %.4f", worst, agreement)};
}

// 3. Viterbi against brute-force sentence enumeration.
Outcome Decoder() {
  const testing::DecoderTrials t = testing::RunDecoderTrials(61, 200);
  return {t.instances >= 100 && t.word_mismatches == 0 && t.max_score_diff <= 1e-9 && t.ties > 0,
          Fmt("%.0f instances (%.0f with tied best sentences), max score diff %.2e", t.instances,
              t.ties, t.max_score_diff) +
              ", " + std::to_string(t.word_mismatches) + " word mismatches"};
}

// 4. Feature extraction, mixing and assembly against direct references.
Outcome Dsp() {
  std::vector<std::string> failures;
  FeatureMatrix bins(9, 40);
  for (Eigen::Index i = 0; i < bins.size(); ++i) bins(i) = static_cast<double>(i);
  if (StackContext(bins, 5).cols() != 440) failures.push_back("context width");

  const LogMelConfig cfg;
  int tones = 0, tone_mismatch = 0;
  for (int k = 0; k < cfg.num_bins; ++k) {
    const auto x = testing::Sine(MelBinCenterHz(cfg, k), 1600, cfg.sample_rate);
    const FeatureMatrix f = ComputeLogMel(x, cfg);
    for (int t = 0; t < f.rows(); t += 3) {
      std::vector<double> row(f.row(t).data(), f.row(t).data() + f.cols());
      tone_mismatch += testing::ArgMax(row) != testing::ArgMax(testing::OracleMelEnergies(x, t * 160, cfg));
      ++tones;
    }
  }
  if (tone_mismatch) failures.push_back("sine argmax");

  Rng rng(71);
  Waveform target, background;
  target.sample_rate = background.sample_rate = 16000;
  for (int i = 0; i < 32000; ++i) target.samples.push_back(2.0 * UniformUnit(rng) - 1.0);
  for (int i = 0; i < 20000; ++i) background.samples.push_back(2.0 * UniformUnit(rng) - 1.0);
  const Waveform mixed = MixWaveforms(target, background);
  bool mix_ok = mixed.samples.size() == target.samples.size();
  for (size_t i = 0; mix_ok && i < mixed.samples.size(); ++i) {
    const double b = i < background.samples.size() ? background.samples[i] : 0.0;
    mix_ok = mixed.samples[i] == 0.5 * (target.samples[i] + b);
  }
  if (!mix_ok) failures.push_back("mixing");

  const Eigen::VectorXd a = Eigen::VectorXd::Ones(440), w = Eigen::VectorXd::Ones(1800);
  const Eigen::VectorXd z = SpeakerOneHot(5, 34);
  struct Case {
    Modality m;
    FusionVariant v;
    Eigen::Index input, identity;
  } cases[] = {{Modality::kA, FusionVariant::kNone, 440, 0},
               {Modality::kAV, FusionVariant::kNone, 2240, 0},
               {Modality::kAI, FusionVariant::kA, 474, 0},
               {Modality::kAVI, FusionVariant::kA, 2274, 0},
               {Modality::kAI, FusionVariant::kB, 440, 34},
               {Modality::kAVI, FusionVariant::kB, 2240, 34},
               {Modality::kAI, FusionVariant::kC, 440, 34},
               {Modality::kAVI, FusionVariant::kC, 2240, 34}};
  for (const Case &c : cases) {
    const auto ex = AssembleExample(c.m, c.v, a, HasVisual(c.m) ? std::optional(w) : std::nullopt,
                                    HasIdentity(c.m) ? std::optional(z) : std::nullopt, 0);
    if (ex.input.size() != c.input || ex.identity.size() != c.identity) {
      failures.push_back("assembly " + ModalityName(c.m) + "/" + VariantName(c.v));
    }
  }
  std::string detail = "440-dim context, " + std::to_string(tones - tone_mismatch) + "/" +
                       std::to_string(tones) + " tone frames agree, mixing exact=" +
                       (mix_ok ? "yes" : "no") + ", assembly dims 440/2240/474/2274";
  for (const auto &f : failures) detail += "; failed: " + f;
  return {failures.empty(), detail};
}

// 5. A small network memorizes a 100-frame batch.
Outcome Overfit() {
  const double acc = testing::OverfitAccuracy(testing::SyntheticFrames(100, 81), 200, 82);
  return {acc > 0.99, Fmt("frame accuracy %.4f after 200 epochs", acc)};
}

// 6. Relative WER ordering on the synthetic two-speaker benchmark.
Outcome Trends() {
  const double margin = 0.9;  // each inequality needs a 10% relative margin
  bool ok = true;
  std::ostringstream detail;
  for (uint64_t seed : {1, 2, 3}) {
    ExperimentConfig cfg = DefaultSyntheticExperiment();
    cfg.seed = seed;
    cfg.corpus.synthetic->seed = 1000 + seed;
    cfg.split_seed = 2000 + seed;
    cfg.mixture_seed = 3000 + seed;
    for (const char *name : {"si/a/one", "si/a/two", "si/av/two", "st-a/a/two", "sd/a/two"})
      cfg.cells.push_back(ParseCell(name));
    const CorpusData data = LoadCorpus(cfg);
    const ExperimentReport r = RunMatrix(cfg, data);
    const auto wer = [&](const char *name) { return r.Find(ParseCell(name))->eval.total.Wer(); };
    const double one = wer("si/a/one"), two = wer("si/a/two"), av = wer("si/av/two"),
                 st = wer("st-a/a/two");
    const CellResult &si = *r.Find(ParseCell("si/a/two"));
    const CellResult &sd = *r.Find(ParseCell("sd/a/two"));
    const int test_utts = static_cast<int>(si.eval.utterances.size());
    bool sd_ok = !sd.eval.per_speaker.empty();
    std::ostringstream per;
    for (const auto &[spk, rep] : sd.eval.per_speaker) {
      const double si_spk = si.eval.per_speaker.at(spk).Wer();
      sd_ok = sd_ok && rep.Wer() <= margin * si_spk;
      per << " s" << spk << " " << Fmt("%.1f<=%.1f", 100.0 * rep.Wer(), 100.0 * si_spk);
    }
    const bool a = two > 3.0 * one / margin && two > 0.0;
    const bool b = av <= margin * two;
    const bool c = st <= margin * two;
    const bool enough = r.num_speakers >= 4 && test_utts >= 200;
    ok = ok && a && b && c && sd_ok && enough;
    detail << "\n    seed " << seed << ": " << r.num_speakers << " speakers, " << test_utts
           << " mixed test utts; one " << Fmt("%.1f%%, two %.1f%%, av %.1f%%", 100 * one, 100 * two,
                                                100 * av)
           << Fmt(", st-a %.1f%%", 100 * st) << "; sd" << per.str() << " ["
           << (a ? "a" : "-") << (b ? "b" : "-") << (c ? "c" : "-") << (sd_ok ? "d" : "-") << "]";
  }
  return {ok, "3 seeds" + detail.str()};
}

// 7. WER scorer on the golden file.
Outcome WerGolden() {
  const auto rows = testing::ReadWerGolden(std::string(AVST_TEST_DATA_DIR) + "/wer_golden.tsv");
  int exact = 0;
  bool identity = false, empty = false, single = false;
  for (const auto &row : rows) {
    const WerReport r = ComputeWer(row.reference, row.hypothesis);
    const bool match = r.substitutions == row.substitutions && r.deletions == row.deletions &&
                       r.insertions == row.insertions && r.reference_words == row.reference_words;
    exact += match;
    if (!match) continue;
    if (row.reference == row.hypothesis && !row.reference.empty()) identity |= r.Wer() == 0.0;
    if (row.hypothesis.empty() && !row.reference.empty()) empty |= r.Wer() == 1.0;
    if (row.reference.size() == 6 && r.Errors() == 1 && r.substitutions == 1)
      single |= Fmt("%.1f", 100.0 * r.Wer()) == "16.7";
  }
  const bool ok = rows.size() == 50 && exact == 50 && identity && empty && single;
  return {ok, std::to_string(exact) + "/" + std::to_string(rows.size()) +
                  " rows exact; identity 0%, empty hypothesis 100%, one substitution in six 16.7%: " +
                  (identity && empty && single ? "yes" : "no")};
}

std::string ReadFile(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// 8. Two runs of the matrix subcommand give byte-identical reports.
Outcome Determinism() {
  const fs::path dir = fs::temp_directory_path() / "avst-acceptance-determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  {
    std::ofstream cfg(dir / "config.json");
    cfg << R"({
  "seed": 91,
  "corpus": {"synthetic": {"num_speakers": 3, "utterances_per_speaker": 16}},
  "architecture": {"hidden_width": 16},
  "train": {"max_epochs": 3},
  "adapt": {"max_epochs": 2}
})";
  }
  ::unsetenv("AVST_CACHE_DIR");
  std::vector<std::string> reports;
  for (const char *run : {"run1", "run2"}) {
    const std::string cmd = std::string("\"") + AVST_CLI_PATH + "\" matrix --config \"" +
                            (dir / "config.json").string() + "\" --out \"" + (dir / run).string() +
                            "\" > \"" + (dir / run).string() + ".log\" 2>&1";
    if (std::system(cmd.c_str()) != 0) return {false, std::string("matrix ") + run + " failed"};
  }
  int files = 0, identical = 0;
  for (const char *f : {"report.txt", "report.json", "config.resolved.json"}) {
    const std::string a = ReadFile(dir / "run1" / f), b = ReadFile(dir / "run2" / f);
    ++files;
    identical += !a.empty() && a == b;
  }
  const std::string json = ReadFile(dir / "run1" / "report.json");
  int cells = 0;
  for (size_t p = json.find("\"cell\""); p != std::string::npos; p = json.find("\"cell\"", p + 1))
    ++cells;
  fs::remove_all(dir);
  return {identical == files && cells == 20,
          std::to_string(identical) + "/" + std::to_string(files) +
              " report files byte-identical across two runs of all " + std::to_string(cells) +
              " cells"};
}

}  // namespace
}  // namespace avst

int main(int argc, char **argv) {
  using namespace avst;
  struct Criterion {
    const char *name;
    double budget_seconds;  // 0 = no runtime bound
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria = {
      {"gradient correctness", 60, Gradients},
      {"adaptation identity", 0, Extension},
      {"decoder exactness", 60, Decoder},
      {"dsp oracles", 0, Dsp},
      {"overfit sanity", 120, Overfit},
      {"qualitative trends", 1800, Trends},
      {"wer scorer", 0, WerGolden},
      {"determinism", 0, Determinism},
  };
  const int only = argc > 1 ? std::atoi(argv[1]) : 0;
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    if (only && static_cast<int>(i) + 1 != only) continue;
    const Criterion &c = criteria[i];
    const auto start = Clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(Clock::now() - start).count();
    std::string timing = Fmt("%.1f s", secs);
    if (c.budget_seconds > 0) {
      timing += Fmt(" of %.0f s", c.budget_seconds);
      if (secs > c.budget_seconds) {
        o.pass = false;
        o.detail += "; over the runtime budget";
      }
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << " " << i + 1 << " " << c.name << " (" << timing
              << "): " << o.detail << std::endl;
  }
  std::cout << failed << " criterion(s) failed" << std::endl;
  return failed == 0 ? 0 : 1;
}

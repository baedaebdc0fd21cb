// src/dsp/dsp-test.cc

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
#include <complex>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <vector>

#include "avst/base/error.h"
#include "avst/dsp/assemble.h"
#include "avst/dsp/feature-matrix.h"
#include "avst/dsp/log-mel.h"
#include "avst/dsp/visual.h"
#include "doctest.h"
#include "oracles.h"

namespace avst {
namespace {

using testing::ArgMax;
using testing::OracleMelEnergies;
using testing::Sine;

FeatureMatrix RandomMatrix(int rows, int cols, unsigned seed) {
  std::mt19937 gen(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  FeatureMatrix m(rows, cols);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) m(r, c) = nd(gen) * (c + 1) + c;
  return m;
}

}  // namespace

TEST_CASE("log-mel shape and frame count") {
  LogMelConfig cfg;
  const auto x = Sine(440.0, 16000, 16000);
  const FeatureMatrix f = ComputeLogMel(x, cfg);
  CHECK(f.cols() == 40);
  CHECK(f.rows() == 1 + (16000 - 400) / 160);
  CHECK(NumFrames(400, cfg) == 1);
  CHECK_THROWS_AS(NumFrames(399, cfg), DataError);
  CHECK_THROWS_AS(ComputeLogMel(std::vector<double>(100, 0.0), cfg), DataError);
}

TEST_CASE("log-mel of silence is the log floor everywhere") {
  LogMelConfig cfg;
  const FeatureMatrix f = ComputeLogMel(std::vector<double>(4000, 0.0), cfg);
  CHECK((f.array() == std::log(cfg.log_floor)).all());
}

TEST_CASE("log-mel output is finite and bounded below") {
  LogMelConfig cfg;
  std::mt19937 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> x(8000);
  for (double &v : x) v = u(gen);
  x[100] = 0.0;
  const FeatureMatrix f = ComputeLogMel(x, cfg);
  CHECK(f.allFinite());
  CHECK(f.minCoeff() >= std::log(cfg.log_floor));
}

TEST_CASE("log-mel matches a direct DFT oracle") {
  LogMelConfig cfg;
  const FeatureMatrix fbank = MelFilterbank(cfg);
  CHECK(fbank.rows() == 40);
  CHECK(fbank.cols() == 257);
  std::mt19937 gen(11);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  std::vector<double> x(1200);
  for (double &v : x) v = u(gen);
  const FeatureMatrix f = ComputeLogMel(x, cfg);
  for (int t : {0, 3, 5}) {
    const auto e = OracleMelEnergies(x, t * 160, cfg);
    for (int b = 0; b < 40; ++b) CHECK(f(t, b) == doctest::Approx(std::log(e[b])).epsilon(1e-9));
  }
}

TEST_CASE("sine at a bin centre peaks in that bin") {
  LogMelConfig cfg;
  int agree_with_k = 0;
  for (int k = 0; k < cfg.num_bins; ++k) {
    const double hz = MelBinCenterHz(cfg, k);
    const auto x = Sine(hz, 1600, cfg.sample_rate);
    const FeatureMatrix f = ComputeLogMel(x, cfg);
    for (int t = 0; t < f.rows(); t += 3) {
      std::vector<double> row(f.row(t).data(), f.row(t).data() + f.cols());
      const int oracle = ArgMax(OracleMelEnergies(x, t * 160, cfg));
      REQUIRE(ArgMax(row) == oracle);
      if (t == 0 && oracle == k) ++agree_with_k;
    }
  }
  // The lowest filters are narrower than the window's main lobe; above
  // them the peak always lands in the excited bin.
  CHECK(agree_with_k >= 36);
  for (int k = 8; k < cfg.num_bins; ++k) {
    const auto x = Sine(MelBinCenterHz(cfg, k), 1600, cfg.sample_rate);
    std::vector<double> row = OracleMelEnergies(x, 480, cfg);
    CHECK(ArgMax(row) == k);
  }
}

TEST_CASE("mel scale round trip") {
  for (double hz : {0.0, 100.0, 1000.0, 7999.0}) CHECK(MelToHz(HzToMel(hz)) == doctest::Approx(hz));
  LogMelConfig bad;
  bad.num_bins = 0;
  CHECK_THROWS_AS(bad.Validate(), UsageError);
  bad = LogMelConfig();
  bad.fft_size = 256;
  CHECK_THROWS_AS(bad.Validate(), UsageError);
  bad = LogMelConfig();
  bad.log_floor = 0.0;
  CHECK_THROWS_AS(bad.Validate(), UsageError);
}

TEST_CASE("normalization matches a two-pass reference") {
  const FeatureMatrix m = RandomMatrix(37, 6, 1);
  const FeatureMatrix n = NormalizeFeatures(m);
  for (int c = 0; c < m.cols(); ++c) {
    double mean = 0, var = 0;
    for (int r = 0; r < m.rows(); ++r) mean += m(r, c);
    mean /= m.rows();
    for (int r = 0; r < m.rows(); ++r) var += (m(r, c) - mean) * (m(r, c) - mean);
    var /= m.rows();
    double out_mean = 0;
    for (int r = 0; r < m.rows(); ++r) {
      CHECK(n(r, c) == doctest::Approx((m(r, c) - mean) / std::sqrt(var)).epsilon(1e-12));
      out_mean += n(r, c);
    }
    CHECK(std::abs(out_mean / m.rows()) < 1e-9);
  }
  const FeatureMatrix twice = NormalizeFeatures(n);
  CHECK((twice - n).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("constant columns normalize to zero") {
  FeatureMatrix m = RandomMatrix(10, 3, 2);
  m.col(1).setConstant(4.25);
  const FeatureMatrix n = NormalizeFeatures(m);
  CHECK((n.col(1).array() == 0.0).all());
}

TEST_CASE("context stacking") {
  FeatureMatrix feat(7, 40);
  for (int r = 0; r < 7; ++r)
    for (int c = 0; c < 40; ++c) feat(r, c) = r * 100 + c;
  const FeatureMatrix s = StackContext(feat, 5);
  CHECK(s.cols() == 440);
  CHECK(s.rows() == 7);
  for (int t = 0; t < 7; ++t)
    for (int j = 0; j < 11; ++j) {
      const int src = std::min(6, std::max(0, t + j - 5));
      for (int c = 0; c < 40; ++c) REQUIRE(s(t, j * 40 + c) == feat(src, c));
    }
  const FeatureMatrix one = StackContext(feat.topRows(1), 5);
  CHECK(one.rows() == 1);
  for (int j = 0; j < 11; ++j) CHECK(one.block(0, j * 40, 1, 40) == feat.topRows(1));
  for (int t : {1, 2, 13}) CHECK(StackContext(RandomMatrix(t, 4, 3), 2).rows() == t);
}

TEST_CASE("visual alignment by nearest timestamp") {
  VisualTrack track;
  track.fps = 25.0;
  track.frames = FeatureMatrix::Zero(10, kRoiDim);
  for (int j = 0; j < 10; ++j) track.frames.row(j).setConstant(j / 255.0);
  const int t_audio = 40;
  const FeatureMatrix a = AlignVisual(track, t_audio, 0.01);
  CHECK(a.rows() == t_audio);
  CHECK(a.cols() == 1800);
  std::vector<int> uses(10, 0);
  for (int t = 0; t < t_audio; ++t) {
    // Brute-force nearest video centre, ties to the later frame.
    const double time = (t + 0.5) * 0.01;
    int best = 0;
    for (int j = 1; j < 10; ++j)
      if (std::abs((j + 0.5) / 25.0 - time) <= std::abs((best + 0.5) / 25.0 - time) + 1e-12)
        best = j;
    CHECK(VisualFrameIndex(t, 0.01, 25.0, 10) == best);
    ++uses[best];
    CHECK(a(t, 0) == track.frames(best, 0));
  }
  for (int u : uses) CHECK(u == 4);

  for (int t = 0; t < 10; ++t) CHECK(VisualFrameIndex(t, 0.04, 25.0, 10) == t);
  VisualTrack single;
  single.frames = FeatureMatrix::Constant(1, kRoiDim, 0.5);
  const FeatureMatrix rep = AlignVisual(single, 17, 0.01);
  CHECK(rep.rows() == 17);
  CHECK((rep.array() == 0.5).all());
}

TEST_CASE("visual track files") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "avst-dsp-test";
  fs::create_directories(dir);
  VisualTrack track;
  track.fps = 29.97;
  track.frames = FeatureMatrix(3, kRoiDim);
  std::mt19937 gen(1);
  std::uniform_int_distribution<int> px(0, 255);
  for (int j = 0; j < 3; ++j)
    for (int c = 0; c < kRoiDim; ++c) track.frames(j, c) = px(gen) / 255.0;
  QuantizePixels(&track);
  WriteVisualTrack((dir / "t.roi").string(), track);
  const VisualTrack back = ReadVisualTrack((dir / "t.roi").string());
  CHECK(back.frames == track.frames);
  CHECK(back.fps == track.fps);

  const fs::path frames = dir / "frames";
  fs::create_directories(frames);
  for (int j = 0; j < 3; ++j) {
    std::string bytes(kRoiDim, '\0');
    for (int c = 0; c < kRoiDim; ++c)
      bytes[c] = static_cast<char>(std::lround(track.frames(j, c) * 255.0));
    std::ofstream((frames / ("f" + std::to_string(j) + ".raw")).string(), std::ios::binary)
        << bytes;
  }
  const VisualTrack from_dir = ReadVisualTrack(frames.string(), 25.0);
  CHECK(from_dir.frames == track.frames);
  std::ofstream((frames / "bad.raw").string(), std::ios::binary) << "short";
  CHECK_THROWS_AS(ReadVisualTrack(frames.string(), 25.0), DataError);
  fs::remove_all(dir);
}

TEST_CASE("feature matrix file round trip is bit exact") {
  FeatureMatrix m = RandomMatrix(5, 7, 9).cast<float>().cast<double>();
  const std::string bytes = SerializeFeatureMatrix(m);
  CHECK(bytes.substr(0, 4) == "FEAT");
  CHECK(bytes.size() == 16 + 4 * 35);
  CHECK(DeserializeFeatureMatrix(bytes, "mem") == m);
  CHECK_THROWS_AS(DeserializeFeatureMatrix(bytes.substr(0, bytes.size() - 1), "mem"), DataError);
  std::string bad = bytes;
  bad[0] = 'X';
  CHECK_THROWS_AS(DeserializeFeatureMatrix(bad, "mem"), DataError);
  FeatureMatrix nan = m;
  nan(0, 0) = std::nan("");
  CHECK_THROWS_AS(CheckFinite(nan, "m"), NumericError);
}

TEST_CASE("speaker one-hot") {
  const Eigen::VectorXd z = SpeakerOneHot(0, 34);
  CHECK(z.size() == 34);
  CHECK(z(0) == 1.0);
  CHECK(z.sum() == 1.0);
  CHECK(z.maxCoeff() == 1.0);
  for (int s = 0; s < 34; ++s) {
    const Eigen::VectorXd v = SpeakerOneHot(s, 34);
    CHECK(v.sum() == 1.0);
    CHECK(v(s) == 1.0);
  }
  CHECK_THROWS_AS(SpeakerOneHot(34, 34), DataError);
  CHECK_THROWS_AS(SpeakerOneHot(-1, 34), DataError);
}

TEST_CASE("assembled dimensions for every modality and variant") {
  const Eigen::VectorXd x = Eigen::VectorXd::Ones(440), w = Eigen::VectorXd::Ones(1800);
  const Eigen::VectorXd z = SpeakerOneHot(3, 34);
  struct Case {
    Modality m;
    FusionVariant v;
    int input, identity;
  } cases[] = {{Modality::kA, FusionVariant::kNone, 440, 0},
               {Modality::kAV, FusionVariant::kNone, 2240, 0},
               {Modality::kAI, FusionVariant::kA, 474, 0},
               {Modality::kAVI, FusionVariant::kA, 2274, 0},
               {Modality::kAI, FusionVariant::kB, 440, 34},
               {Modality::kAVI, FusionVariant::kB, 2240, 34},
               {Modality::kAI, FusionVariant::kC, 440, 34},
               {Modality::kAVI, FusionVariant::kC, 2240, 34}};
  for (const auto &c : cases) {
    const auto ex = AssembleExample(c.m, c.v, x,
                                    HasVisual(c.m) ? std::optional(w) : std::nullopt,
                                    HasIdentity(c.m) ? std::optional(z) : std::nullopt, 2);
    CHECK(ex.input.size() == c.input);
    CHECK(ex.identity.size() == c.identity);
    CHECK(AssembledInputDim(c.m, c.v, 440, 1800, 34) == c.input);
    CHECK(ex.label == 2);
  }
  const auto avi = AssembleExample(Modality::kAVI, FusionVariant::kA, x, w, z, 0);
  CHECK(avi.input(2240 + 3) == 1.0);
  CHECK(avi.input.tail(34).sum() == 1.0);
  CHECK_THROWS_AS(AssembleExample(Modality::kAV, FusionVariant::kNone, x, std::nullopt,
                                  std::nullopt, 0),
                  DataError);
  CHECK_THROWS_AS(AssembleExample(Modality::kA, FusionVariant::kNone, x, std::nullopt, z, 0),
                  DataError);
  CHECK_THROWS(CheckModalityVariant(Modality::kA, FusionVariant::kA));
  CHECK_THROWS(CheckModalityVariant(Modality::kAI, FusionVariant::kNone));
}

}  // namespace avst

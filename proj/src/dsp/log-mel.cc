// src/dsp/log-mel.cc

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

#include "avst/dsp/log-mel.h"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <numbers>
#include <vector>

#include "avst/base/error.h"

namespace avst {

int LogMelConfig::WindowSamples() const {
  return static_cast<int>(std::lround(window_length * sample_rate));
}

int LogMelConfig::HopSamples() const {
  return static_cast<int>(std::lround(hop_length * sample_rate));
}

int LogMelConfig::FftSize() const {
  if (fft_size > 0) return fft_size;
  int n = 1;
  while (n < WindowSamples()) n <<= 1;
  return n;
}

double LogMelConfig::MelHigh() const {
  return mel_high > 0.0 ? mel_high : 0.5 * sample_rate;
}

void LogMelConfig::Validate() const {
  if (sample_rate <= 0) throw UsageError("logmel.sample_rate must be positive");
  if (WindowSamples() < 1) throw UsageError("logmel.window_length too small");
  if (HopSamples() < 1) throw UsageError("logmel.hop_length too small");
  if (FftSize() < WindowSamples())
    throw UsageError("logmel.fft_size must be >= window samples");
  if (num_bins < 1) throw UsageError("logmel.num_bins must be >= 1");
  if (!(log_floor > 0.0)) throw UsageError("logmel.log_floor must be > 0");
  if (mel_low < 0.0 || MelHigh() <= mel_low || MelHigh() > 0.5 * sample_rate)
    throw UsageError("logmel.mel_low/mel_high out of range");
}

double HzToMel(double hz) { return 1127.0 * std::log(1.0 + hz / 700.0); }
double MelToHz(double mel) { return 700.0 * (std::exp(mel / 1127.0) - 1.0); }

static double MelPoint(const LogMelConfig &cfg, int i) {
  const double lo = HzToMel(cfg.mel_low), hi = HzToMel(cfg.MelHigh());
  return lo + i * (hi - lo) / (cfg.num_bins + 1);
}

double MelBinCenterHz(const LogMelConfig &cfg, int bin) {
  return MelToHz(MelPoint(cfg, bin + 1));
}

FeatureMatrix MelFilterbank(const LogMelConfig &cfg) {
  cfg.Validate();
  const int nfft = cfg.FftSize(), num_fft_bins = nfft / 2 + 1;
  FeatureMatrix w = FeatureMatrix::Zero(cfg.num_bins, num_fft_bins);
  for (int k = 0; k < cfg.num_bins; ++k) {
    const double left = MelPoint(cfg, k), center = MelPoint(cfg, k + 1),
                 right = MelPoint(cfg, k + 2);
    for (int i = 0; i < num_fft_bins; ++i) {
      const double mel = HzToMel(static_cast<double>(i) * cfg.sample_rate / nfft);
      if (mel > left && mel < right) {
        w(k, i) = mel <= center ? (mel - left) / (center - left)
                                : (right - mel) / (right - center);
      }
    }
  }
  return w;
}

int NumFrames(int num_samples, const LogMelConfig &cfg) {
  const int win = cfg.WindowSamples(), hop = cfg.HopSamples();
  if (num_samples < win)
    throw DataError("waveform has " + std::to_string(num_samples) +
                    " samples, shorter than one analysis window (" +
                    std::to_string(win) + ")");
  return 1 + (num_samples - win) / hop;
}

namespace {

// FFTW's planner is not thread-safe; execution on distinct arrays is.
std::mutex &PlannerMutex() {
  static std::mutex m;
  return m;
}

struct PlanDeleter {
  void operator()(fftw_plan_s *p) const {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    fftw_destroy_plan(p);
  }
};

struct FftwFree {
  void operator()(void *p) const { fftw_free(p); }
};

}  // namespace

FeatureMatrix ComputeLogMel(std::span<const double> samples,
                            const LogMelConfig &cfg) {
  cfg.Validate();
  const int win = cfg.WindowSamples(), hop = cfg.HopSamples();
  const int nfft = cfg.FftSize(), num_fft_bins = nfft / 2 + 1;
  const int num_frames = NumFrames(static_cast<int>(samples.size()), cfg);

  std::vector<double> window(win);
  for (int i = 0; i < win; ++i)
    window[i] = win == 1 ? 1.0
                         : 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * i / (win - 1));
  const FeatureMatrix fbank = MelFilterbank(cfg);

  std::unique_ptr<double, FftwFree> in(
      static_cast<double *>(fftw_malloc(sizeof(double) * nfft)));
  std::unique_ptr<fftw_complex, FftwFree> out(static_cast<fftw_complex *>(
      fftw_malloc(sizeof(fftw_complex) * num_fft_bins)));
  std::unique_ptr<fftw_plan_s, PlanDeleter> plan;
  {
    std::lock_guard<std::mutex> lock(PlannerMutex());
    plan.reset(fftw_plan_dft_r2c_1d(nfft, in.get(), out.get(), FFTW_ESTIMATE));
  }

  FeatureMatrix feat(num_frames, cfg.num_bins);
  Eigen::VectorXd power(num_fft_bins);
  for (int t = 0; t < num_frames; ++t) {
    const double *frame = samples.data() + static_cast<size_t>(t) * hop;
    for (int i = 0; i < win; ++i) in.get()[i] = frame[i] * window[i];
    std::fill(in.get() + win, in.get() + nfft, 0.0);
    fftw_execute(plan.get());
    for (int i = 0; i < num_fft_bins; ++i) {
      const double re = out.get()[i][0], im = out.get()[i][1];
      power(i) = re * re + im * im;
    }
    const Eigen::VectorXd energies = fbank * power;
    for (int k = 0; k < cfg.num_bins; ++k)
      feat(t, k) = std::log(std::max(energies(k), cfg.log_floor));
  }
  return feat;
}

FeatureMatrix NormalizeFeatures(const FeatureMatrix &feat) {
  const Eigen::Index rows = feat.rows(), cols = feat.cols();
  FeatureMatrix out(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    double mean = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) mean += feat(r, c);
    mean /= static_cast<double>(std::max<Eigen::Index>(rows, 1));
    double var = 0.0;
    for (Eigen::Index r = 0; r < rows; ++r) {
      const double d = feat(r, c) - mean;
      var += d * d;
    }
    var /= static_cast<double>(std::max<Eigen::Index>(rows, 1));
    if (var < 1e-10) {
      out.col(c).setZero();
      continue;
    }
    const double inv_std = 1.0 / std::sqrt(var);
    for (Eigen::Index r = 0; r < rows; ++r) out(r, c) = (feat(r, c) - mean) * inv_std;
  }
  return out;
}

FeatureMatrix StackContext(const FeatureMatrix &feat, int radius) {
  if (radius < 0) throw UsageError("context radius must be >= 0");
  const Eigen::Index rows = feat.rows(), dim = feat.cols();
  const int width = 2 * radius + 1;
  FeatureMatrix out(rows, dim * width);
  for (Eigen::Index t = 0; t < rows; ++t) {
    for (int o = -radius; o <= radius; ++o) {
      const Eigen::Index src = std::clamp<Eigen::Index>(t + o, 0, rows - 1);
      out.block(t, (o + radius) * dim, 1, dim) = feat.row(src);
    }
  }
  return out;
}

}  // namespace avst

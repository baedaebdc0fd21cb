// include/avst/dsp/log-mel.h

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

#ifndef AVST_DSP_LOG_MEL_H_
#define AVST_DSP_LOG_MEL_H_

#include <span>

#include "avst/dsp/feature-matrix.h"

namespace avst {

struct LogMelConfig {
  int sample_rate = 16000;
  double window_length = 0.025;  // seconds
  double hop_length = 0.010;     // seconds
  int fft_size = 0;              // 0: next power of two >= window samples
  int num_bins = 40;
  double log_floor = 1e-10;
  double mel_low = 0.0;          // Hz
  double mel_high = 0.0;         // Hz; <= 0 means Nyquist

  int WindowSamples() const;
  int HopSamples() const;
  int FftSize() const;
  double MelHigh() const;
  /// Throws UsageError naming the offending field.
  void Validate() const;
};

double HzToMel(double hz);
double MelToHz(double mel);

/// Centre frequency in Hz of triangular filter `bin`.
double MelBinCenterHz(const LogMelConfig &cfg, int bin);

/// num_bins x (fft_size/2 + 1) triangular weights, built on the mel axis and
/// not area-normalised.
FeatureMatrix MelFilterbank(const LogMelConfig &cfg);

/// Number of frames for `num_samples` input samples:
/// 1 + floor((N - window) / hop).  Throws DataError when N < window.
int NumFrames(int num_samples, const LogMelConfig &cfg);

/// Frame t holds log(max(E_k, log_floor)) where E_k is the Hamming-windowed
/// power spectrum of samples [t*hop, t*hop + window) weighted by filter k.
FeatureMatrix ComputeLogMel(std::span<const double> samples,
                            const LogMelConfig &cfg);

/// Per-column mean 0 / variance 1 across the rows.  Columns whose variance is
/// below 1e-10 become zero.
FeatureMatrix NormalizeFeatures(const FeatureMatrix &feat);

/// Row t of the output is rows t-radius .. t+radius of `feat` concatenated,
/// with out-of-range indices clamped to the first/last row.
FeatureMatrix StackContext(const FeatureMatrix &feat, int radius = 5);

}  // namespace avst

#endif  // AVST_DSP_LOG_MEL_H_

// include/avst/corpus/mixing.h

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

#ifndef AVST_CORPUS_MIXING_H_
#define AVST_CORPUS_MIXING_H_

#include <cstdint>
#include <string>
#include <vector>

#include "avst/corpus/manifest.h"
#include "avst/corpus/wave-io.h"

namespace avst {

struct MixturePair {
  std::string target;
  std::string background;
  uint64_t seed = 0;
};

/// Draws the background uniformly from the pool entries whose speaker differs
/// from the target's.  The draw depends only on (target.utt_id, seed).
/// Throws DataError when no eligible entry exists.
MixturePair PairBackground(const ManifestEntry &target,
                           const std::vector<const ManifestEntry *> &pool,
                           uint64_t seed);

/// Single-channel equal-weight mixture: out[i] = gain * (t[i] + b'[i]), where
/// b' is the background truncated or zero-padded to the target's length.
/// Output is clamped to [-1, 1] (a no-op for the default gain of 0.5).
/// Throws DataError on a sample-rate mismatch or an empty input.
Waveform MixWaveforms(const Waveform &target, const Waveform &background,
                      double gain = 0.5);

}  // namespace avst

#endif  // AVST_CORPUS_MIXING_H_

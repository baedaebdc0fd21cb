// src/corpus/mixing.cc

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

#include "avst/corpus/mixing.h"

#include <algorithm>

#include "avst/base/error.h"
#include "avst/base/random.h"

namespace avst {

MixturePair PairBackground(const ManifestEntry &target,
                           const std::vector<const ManifestEntry *> &pool,
                           uint64_t seed) {
  std::vector<const ManifestEntry *> eligible;
  for (const ManifestEntry *e : pool)
    if (e->speaker_id != target.speaker_id) eligible.push_back(e);
  if (eligible.empty())
    throw DataError("no background utterance from a speaker other than " +
                    std::to_string(target.speaker_id) + " for '" + target.utt_id + "'");
  Rng rng(DeriveSeed(seed, target.utt_id));
  const auto pick = UniformIndex(rng, eligible.size());
  return {target.utt_id, eligible[pick]->utt_id, seed};
}

Waveform MixWaveforms(const Waveform &target, const Waveform &background, double gain) {
  if (target.samples.empty() || background.samples.empty())
    throw DataError("cannot mix an empty waveform");
  if (target.sample_rate != background.sample_rate)
    throw DataError("sample-rate mismatch: target " + std::to_string(target.sample_rate) +
                    " Hz, background " + std::to_string(background.sample_rate) + " Hz");
  Waveform out;
  out.sample_rate = target.sample_rate;
  const size_t n = target.samples.size(), nb = background.samples.size();
  out.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const double b = i < nb ? background.samples[i] : 0.0;
    out.samples[i] = std::clamp(gain * (target.samples[i] + b), -1.0, 1.0);
  }
  return out;
}

}  // namespace avst

// include/avst/corpus/splits.h

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

#ifndef AVST_CORPUS_SPLITS_H_
#define AVST_CORPUS_SPLITS_H_

#include <cstdint>
#include <string>
#include <vector>

#include "avst/corpus/manifest.h"

namespace avst {

struct SplitRatios {
  double train = 1.0;
  double valid = 0.0;
  double test = 0.0;
};

/// Disjoint utterance-id lists.  `background` is everything outside the three
/// one-speaker sets and feeds mixture pairing.
struct SplitSet {
  std::vector<std::string> train, valid, test, background;
  bool operator==(const SplitSet &) const = default;
};

/// Per-speaker stratified split.  For each speaker, its utterances (sorted by
/// id, then shuffled with a speaker-specific seed) are cut into floor(r * n)
/// train/valid/test items, at least one for every nonzero ratio; the rest go
/// to the background pool.  Lists are sorted by utt_id.
/// Throws UsageError on bad ratios and DataError when a speaker has fewer
/// utterances than nonzero split slots.
SplitSet MakeSplits(const Manifest &manifest, const SplitRatios &ratios, uint64_t seed);

/// Throws DataError unless the lists are pairwise disjoint and drawn from the
/// manifest.
void ValidateSplits(const SplitSet &splits, const Manifest &manifest);

// JSON object {"train": [...], "valid": [...], "test": [...], "background": [...]}.
std::string FormatSplits(const SplitSet &splits);
SplitSet ParseSplits(const std::string &text, const std::string &source);
void SaveSplits(const std::string &path, const SplitSet &splits);
SplitSet LoadSplits(const std::string &path);

}  // namespace avst

#endif  // AVST_CORPUS_SPLITS_H_

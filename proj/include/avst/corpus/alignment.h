// include/avst/corpus/alignment.h

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

#ifndef AVST_CORPUS_ALIGNMENT_H_
#define AVST_CORPUS_ALIGNMENT_H_

#include <string>
#include <vector>

namespace avst {

/// Frames [start, end) carry `phoneme`.
struct AlignSegment {
  int phoneme = 0;
  int start = 0;
  int end = 0;
  bool operator==(const AlignSegment &) const = default;
};

using Alignment = std::vector<AlignSegment>;

/// Throws DataError unless the segments are nonempty, contiguous and tile
/// exactly [0, num_frames).
void ValidateAlignment(const Alignment &align, int num_frames, const std::string &what);

/// Number of frames covered (end of the last segment).
int AlignmentLength(const Alignment &align);

/// Per-frame phoneme labels.
std::vector<int> AlignmentToLabels(const Alignment &align);

/// Phoneme sequence, one entry per segment.
std::vector<int> AlignmentPhonemes(const Alignment &align);

// Text format: one "phoneme_id start_frame end_frame" line per segment, end
// exclusive.  Blank lines are ignored.
Alignment ReadAlignment(const std::string &path);
void WriteAlignment(const std::string &path, const Alignment &align);

}  // namespace avst

#endif  // AVST_CORPUS_ALIGNMENT_H_

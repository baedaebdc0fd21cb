// include/avst/decoder/wer.h

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

#ifndef AVST_DECODER_WER_H_
#define AVST_DECODER_WER_H_

#include <string>
#include <vector>

namespace avst {

struct WerReport {
  int substitutions = 0;
  int deletions = 0;
  int insertions = 0;
  int reference_words = 0;

  int Errors() const { return substitutions + deletions + insertions; }
  /// (S + D + I) / N; 0 when N == 0 (only reachable through aggregation).
  double Wer() const;
  WerReport &operator+=(const WerReport &other);
  bool operator==(const WerReport &) const = default;
};

/// Minimum edit distance with unit costs.  Among alignments with the fewest
/// errors, the one with the most substitutions is reported (so S/D/I are
/// well defined).  Throws DataError on an empty reference.
WerReport ComputeWer(const std::vector<std::string> &reference,
                     const std::vector<std::string> &hypothesis);

}  // namespace avst

#endif  // AVST_DECODER_WER_H_

// include/avst/decoder/viterbi.h

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

#ifndef AVST_DECODER_VITERBI_H_
#define AVST_DECODER_VITERBI_H_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "avst/corpus/alignment.h"
#include "avst/decoder/decode-graph.h"
#include "avst/dsp/feature-matrix.h"

namespace avst {

struct DecodeResult {
  std::vector<std::string> words;  // exactly one per slot
  std::vector<int> state_path;     // one graph state per frame
  double score = 0.0;
};

/// Per-frame emission scores: log posterior, minus log prior when priors are
/// given (scaled likelihood).  Posteriors are floored at 1e-30 first.
FeatureMatrix EmissionScores(const FeatureMatrix &posteriors,
                             const std::optional<Eigen::VectorXd> &priors);

/// Exact Viterbi search over the grammar graph, maximising the sum of
/// emission and transition log scores.  Among equal-scoring paths, the one
/// spelling the lexicographically smallest word sequence wins.
/// Throws DataError if there are fewer frames than the shortest sentence
/// needs or if the phoneme ids exceed the score columns.
DecodeResult ViterbiDecodeScores(const FeatureMatrix &log_emissions,
                                 const DecodeGraph &graph);

DecodeResult ViterbiDecode(const FeatureMatrix &posteriors, const DecodeGraph &graph,
                           const std::optional<Eigen::VectorXd> &priors = std::nullopt);

/// Fraction of frames whose argmax posterior equals the aligned phoneme.
double FrameAccuracy(const FeatureMatrix &posteriors, const Alignment &alignment);

}  // namespace avst

#endif  // AVST_DECODER_VITERBI_H_

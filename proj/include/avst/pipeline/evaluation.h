// include/avst/pipeline/evaluation.h

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

#ifndef AVST_PIPELINE_EVALUATION_H_
#define AVST_PIPELINE_EVALUATION_H_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "avst/decoder/decode-graph.h"
#include "avst/decoder/wer.h"
#include "avst/nnet/dnn.h"
#include "avst/pipeline/corpus-data.h"

namespace avst {

struct UtteranceScore {
  std::string utt_id;
  int speaker_id = 0;
  std::vector<std::string> hypothesis;
  WerReport wer;
  int frames = 0;
  int correct_frames = 0;
};

struct Evaluation {
  WerReport total;
  std::map<int, WerReport> per_speaker;
  int frames = 0;
  int correct_frames = 0;
  std::vector<UtteranceScore> utterances;

  double FrameAccuracy() const;
  /// Adds `other`'s utterances (used to pool per-speaker models).
  void Merge(const Evaluation &other);
};

/// Decodes every utterance of `set` from the given frame posteriors (rows
/// parallel to set.frames) and scores it against its transcript.
Evaluation EvaluatePosteriors(const PreparedSet &set, const FeatureMatrix &posteriors,
                              const DecodeGraph &graph,
                              const std::optional<Eigen::VectorXd> &priors);

/// EvaluatePosteriors with the model's posteriors; priors are applied when
/// `use_priors` is set and the model carries them.
Evaluation EvaluateModel(const DnnModel &model, const PreparedSet &set,
                         const DecodeGraph &graph, bool use_priors);

}  // namespace avst

#endif  // AVST_PIPELINE_EVALUATION_H_

// src/pipeline/evaluation.cc

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

#include "avst/pipeline/evaluation.h"

#include "avst/base/error.h"
#include "avst/decoder/viterbi.h"
#include "avst/nnet/train.h"

namespace avst {

double Evaluation::FrameAccuracy() const {
  return frames == 0 ? 0.0 : static_cast<double>(correct_frames) / frames;
}

void Evaluation::Merge(const Evaluation &other) {
  total += other.total;
  for (const auto &[s, w] : other.per_speaker) per_speaker[s] += w;
  frames += other.frames;
  correct_frames += other.correct_frames;
  utterances.insert(utterances.end(), other.utterances.begin(), other.utterances.end());
}

Evaluation EvaluatePosteriors(const PreparedSet &set, const FeatureMatrix &posteriors,
                              const DecodeGraph &graph,
                              const std::optional<Eigen::VectorXd> &priors) {
  if (posteriors.rows() != set.frames.NumFrames())
    throw DataError("posterior rows " + std::to_string(posteriors.rows()) +
                    " do not match the " + std::to_string(set.frames.NumFrames()) +
                    " prepared frames");
  Evaluation ev;
  for (const auto &u : set.utterances) {
    const FeatureMatrix post = posteriors.middleRows(u.first_frame, u.num_frames);
    UtteranceScore score;
    score.utt_id = u.utt_id;
    score.speaker_id = u.speaker_id;
    score.hypothesis = ViterbiDecode(post, graph, priors).words;
    score.wer = ComputeWer(u.transcript, score.hypothesis);
    score.frames = u.num_frames;
    for (int t = 0; t < u.num_frames; ++t) {
      Eigen::Index best;
      post.row(t).maxCoeff(&best);
      if (best == set.frames.label[u.first_frame + t]) ++score.correct_frames;
    }
    ev.total += score.wer;
    ev.per_speaker[u.speaker_id] += score.wer;
    ev.frames += score.frames;
    ev.correct_frames += score.correct_frames;
    ev.utterances.push_back(std::move(score));
  }
  return ev;
}

Evaluation EvaluateModel(const DnnModel &model, const PreparedSet &set,
                         const DecodeGraph &graph, bool use_priors) {
  const FeatureMatrix post = PredictFrames(model, set.frames);
  return EvaluatePosteriors(set, post, graph,
                            use_priors ? model.priors : std::optional<Eigen::VectorXd>());
}

}  // namespace avst

// include/avst/nnet/frame-dataset.h

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

#ifndef AVST_NNET_FRAME_DATASET_H_
#define AVST_NNET_FRAME_DATASET_H_

#include <span>
#include <vector>

#include <Eigen/Core>

#include "avst/nnet/dnn.h"

namespace avst {

using FloatRows = Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Frame-level training material.  Acoustic rows are stored per frame; each
/// frame points at a row of `visual` (mouth images are shared by the audio
/// frames aligned to the same video frame), so AV inputs are assembled per
/// batch instead of being materialised.
struct FrameDataset {
  FloatRows acoustic;            // N x acoustic_dim
  FloatRows visual;              // V x visual_dim, may be empty
  std::vector<int> visual_row;   // per frame, -1 without video
  std::vector<int> speaker;      // per frame
  std::vector<int> label;        // per frame
  std::vector<int> utterance;    // per frame, index into the source list
  int num_speakers = 0;

  int NumFrames() const { return static_cast<int>(label.size()); }
  bool HasVisual() const { return visual.rows() > 0; }
  /// Frames whose speaker equals `speaker_id`.
  std::vector<int> FramesOfSpeaker(int speaker_id) const;
};

/// Copies a subset of frames (sharing nothing with the source).
FrameDataset SelectFrames(const FrameDataset &data, std::span<const int> frames);

/// Appends `extra` to `data`; both must have the same feature widths.
void AppendFrames(FrameDataset *data, const FrameDataset &extra);

/// Builds the batch for `frames` with the input layout `spec` expects:
/// [acoustic | visual?] plus the one-hot identity either as trailing input
/// columns (variant A) or as the separate identity matrix (B, C).
void FillBatch(const FrameDataset &data, const ArchitectureSpec &spec,
               std::span<const int> frames, Batch<float> *batch);

/// Add-one smoothed label frequencies, rounded to float precision.
Eigen::VectorXd EstimatePriors(const FrameDataset &data, int num_labels);

}  // namespace avst

#endif  // AVST_NNET_FRAME_DATASET_H_

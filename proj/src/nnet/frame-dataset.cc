// src/nnet/frame-dataset.cc

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

#include "avst/nnet/frame-dataset.h"

#include "avst/base/error.h"

namespace avst {

std::vector<int> FrameDataset::FramesOfSpeaker(int speaker_id) const {
  std::vector<int> out;
  for (int i = 0; i < NumFrames(); ++i)
    if (speaker[i] == speaker_id) out.push_back(i);
  return out;
}

FrameDataset SelectFrames(const FrameDataset &data, std::span<const int> frames) {
  FrameDataset out;
  out.num_speakers = data.num_speakers;
  out.acoustic.resize(static_cast<Eigen::Index>(frames.size()), data.acoustic.cols());
  std::vector<int> visual_map(data.visual.rows(), -1);
  std::vector<int> visual_src;
  for (size_t i = 0; i < frames.size(); ++i) {
    const int f = frames[i];
    out.acoustic.row(static_cast<Eigen::Index>(i)) = data.acoustic.row(f);
    out.speaker.push_back(data.speaker[f]);
    out.label.push_back(data.label[f]);
    out.utterance.push_back(data.utterance[f]);
    const int v = data.visual_row.empty() ? -1 : data.visual_row[f];
    if (v >= 0 && visual_map[v] < 0) {
      visual_map[v] = static_cast<int>(visual_src.size());
      visual_src.push_back(v);
    }
    out.visual_row.push_back(v >= 0 ? visual_map[v] : -1);
  }
  out.visual.resize(static_cast<Eigen::Index>(visual_src.size()), data.visual.cols());
  for (size_t j = 0; j < visual_src.size(); ++j)
    out.visual.row(static_cast<Eigen::Index>(j)) = data.visual.row(visual_src[j]);
  return out;
}

void AppendFrames(FrameDataset *data, const FrameDataset &extra) {
  if (data->NumFrames() == 0 && data->acoustic.cols() == 0) {
    *data = extra;
    return;
  }
  if (data->acoustic.cols() != extra.acoustic.cols() ||
      (extra.visual.rows() > 0 && data->visual.rows() > 0 &&
       data->visual.cols() != extra.visual.cols()))
    throw DataError("cannot append frames with different feature widths");
  const Eigen::Index n0 = data->acoustic.rows(), v0 = data->visual.rows();
  data->acoustic.conservativeResize(n0 + extra.acoustic.rows(), Eigen::NoChange);
  data->acoustic.bottomRows(extra.acoustic.rows()) = extra.acoustic;
  if (extra.visual.rows() > 0) {
    if (v0 == 0) data->visual.resize(0, extra.visual.cols());
    data->visual.conservativeResize(v0 + extra.visual.rows(), extra.visual.cols());
    data->visual.bottomRows(extra.visual.rows()) = extra.visual;
  }
  for (int i = 0; i < extra.NumFrames(); ++i) {
    const int v = extra.visual_row.empty() ? -1 : extra.visual_row[i];
    data->visual_row.push_back(v >= 0 ? static_cast<int>(v0) + v : -1);
    data->speaker.push_back(extra.speaker[i]);
    data->label.push_back(extra.label[i]);
    data->utterance.push_back(extra.utterance[i]);
  }
  data->num_speakers = std::max(data->num_speakers, extra.num_speakers);
}

void FillBatch(const FrameDataset &data, const ArchitectureSpec &spec,
               std::span<const int> frames, Batch<float> *batch) {
  const Eigen::Index rows = static_cast<Eigen::Index>(frames.size());
  const int ad = spec.acoustic_dim;
  if (data.acoustic.cols() != ad)
    throw DataError("dataset acoustic width " + std::to_string(data.acoustic.cols()) +
                    " does not match model " + spec.Describe());
  const bool visual = HasVisual(spec.modality);
  if (visual && data.visual.cols() != spec.visual_dim)
    throw DataError("model " + spec.Describe() + " needs visual features of width " +
                    std::to_string(spec.visual_dim));
  if (HasIdentity(spec.modality) && data.num_speakers > spec.identity_dim)
    throw DataError("dataset has " + std::to_string(data.num_speakers) +
                    " speakers but the identity input has " + std::to_string(spec.identity_dim));
  batch->input.setZero(rows, spec.BatchInputDim());
  const int id_dim = spec.BatchIdentityDim();
  if (id_dim > 0)
    batch->identity.setZero(rows, id_dim);
  else
    batch->identity.resize(0, 0);
  batch->labels.resize(frames.size());
  const int id_offset = ad + (visual ? spec.visual_dim : 0);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const int f = frames[r];
    batch->input.row(r).head(ad) = data.acoustic.row(f);
    if (visual) {
      const int v = data.visual_row[f];
      if (v < 0) throw DataError("frame " + std::to_string(f) + " has no visual features");
      batch->input.row(r).segment(ad, spec.visual_dim) = data.visual.row(v);
    }
    if (spec.variant == FusionVariant::kA) batch->input(r, id_offset + data.speaker[f]) = 1.0f;
    if (id_dim > 0) batch->identity(r, data.speaker[f]) = 1.0f;
    batch->labels[r] = data.label[f];
  }
}

Eigen::VectorXd EstimatePriors(const FrameDataset &data, int num_labels) {
  Eigen::VectorXd counts = Eigen::VectorXd::Ones(num_labels);
  for (int y : data.label) {
    if (y < 0 || y >= num_labels)
      throw DataError("label " + std::to_string(y) + " outside [0, " +
                      std::to_string(num_labels) + ")");
    counts(y) += 1.0;
  }
  counts /= counts.sum();
  return counts.cast<float>().cast<double>();
}

}  // namespace avst

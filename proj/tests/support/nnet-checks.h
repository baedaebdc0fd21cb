// tests/support/nnet-checks.h

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

// Reusable network checks shared by the unit tests and the acceptance binary.

#ifndef AVST_TESTS_SUPPORT_NNET_CHECKS_H_
#define AVST_TESTS_SUPPORT_NNET_CHECKS_H_

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "avst/base/random.h"
#include "avst/corpus/synthetic.h"
#include "avst/nnet/dnn.h"
#include "avst/nnet/frame-dataset.h"
#include "avst/nnet/train.h"
#include "avst/pipeline/corpus-data.h"

namespace avst {
namespace testing {

inline std::vector<std::pair<Modality, FusionVariant>> AllArchitectures() {
  return {{Modality::kA, FusionVariant::kNone},  {Modality::kAV, FusionVariant::kNone},
          {Modality::kAI, FusionVariant::kA},    {Modality::kAVI, FusionVariant::kA},
          {Modality::kAI, FusionVariant::kB},    {Modality::kAVI, FusionVariant::kB},
          {Modality::kAI, FusionVariant::kC},    {Modality::kAVI, FusionVariant::kC}};
}

inline std::string ArchName(Modality m, FusionVariant v) {
  return ModalityName(m) + "/" + VariantName(v);
}

// Full-size inputs (440 acoustic, 1800 visual, 34 speakers), tiny hidden stack.
inline ArchitectureSpec ToySpec(Modality m, FusionVariant v, int width = 8, int labels = 5) {
  ArchitectureSpec spec;
  spec.modality = m;
  spec.variant = v;
  spec.num_hidden_layers = 4;
  spec.hidden_width = width;
  spec.output_labels = labels;
  spec.acoustic_dim = 440;
  spec.visual_dim = 1800;
  spec.identity_dim = 34;
  spec.identity_embed_dim = 8;
  spec.injection_layer = 1;
  return spec;
}

// Gaussian features; identity one-hots in the trailing input block (variant A)
// or in the separate identity matrix (variants B and C).
template <typename Real>
Batch<Real> RandomBatch(const ArchitectureSpec &spec, int rows, uint64_t seed) {
  Rng rng(seed);
  Batch<Real> b;
  b.input.resize(rows, spec.BatchInputDim());
  for (Eigen::Index c = 0; c < b.input.cols(); ++c)
    for (int r = 0; r < rows; ++r) b.input(r, c) = static_cast<Real>(StandardNormal(rng));
  const int id_dim = spec.identity_dim;
  if (spec.variant == FusionVariant::kA) {
    b.input.rightCols(id_dim).setZero();
    for (int r = 0; r < rows; ++r)
      b.input(r, b.input.cols() - id_dim + static_cast<int>(UniformIndex(rng, id_dim))) = 1;
  } else if (spec.BatchIdentityDim() > 0) {
    b.identity = Mat<Real>::Zero(rows, id_dim);
    for (int r = 0; r < rows; ++r) b.identity(r, static_cast<int>(UniformIndex(rng, id_dim))) = 1;
  }
  for (int r = 0; r < rows; ++r)
    b.labels.push_back(static_cast<int>(UniformIndex(rng, spec.output_labels)));
  return b;
}

template <typename Real>
std::vector<std::pair<Real *, Eigen::Index>> FlatBlocks(DnnParameters<Real> *p) {
  std::vector<std::pair<Real *, Eigen::Index>> out;
  p->ForEach([&](auto &m) { out.emplace_back(m.data(), m.size()); });
  return out;
}

struct GradientReport {
  double max_rel_error = 0.0;
  long num_checked = 0;
};

// Compares every backprop gradient entry with a central difference.  The
// relative error is |a - n| / max(|a|, |n|, 1e-8).
inline GradientReport CheckGradients(const ArchitectureSpec &spec, uint64_t seed, int rows = 4,
                                     double step = 1e-4) {
  BasicDnnModel<double> model = InitModel<double>(spec, seed);
  // Nonzero biases so that no layer starts out exactly symmetric.
  Rng rng(DeriveSeed(seed, "bias"));
  model.params.ForEach([&](auto &m) {
    if constexpr (std::decay_t<decltype(m)>::ColsAtCompileTime == 1)
      for (Eigen::Index i = 0; i < m.size(); ++i) m(i) = 0.1 * StandardNormal(rng);
  });
  const Batch<double> batch = RandomBatch<double>(spec, rows, DeriveSeed(seed, "batch"));
  DnnParameters<double> grads;
  LossAndGradients(model, batch, &grads);
  auto params = FlatBlocks(&model.params);
  auto gblocks = FlatBlocks(&grads);
  GradientReport report;
  for (size_t b = 0; b < params.size(); ++b) {
    for (Eigen::Index i = 0; i < params[b].second; ++i) {
      double &p = params[b].first[i];
      const double saved = p;
      p = saved + step;
      const double up = Loss(model, batch);
      p = saved - step;
      const double down = Loss(model, batch);
      p = saved;
      const double numeric = (up - down) / (2.0 * step);
      const double analytic = gblocks[b].first[i];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), 1e-8});
      report.max_rel_error = std::max(report.max_rel_error, std::abs(numeric - analytic) / denom);
      ++report.num_checked;
    }
  }
  return report;
}

// Batch for `spec` built from a batch of its speaker-independent parent by
// appending identity information.
inline Batch<float> WithIdentity(const Batch<float> &parent, const ArchitectureSpec &spec,
                                 uint64_t seed) {
  Rng rng(seed);
  Batch<float> b;
  b.labels = parent.labels;
  const Eigen::Index rows = parent.Rows();
  Mat<float> z = Mat<float>::Zero(rows, spec.identity_dim);
  for (Eigen::Index r = 0; r < rows; ++r) z(r, static_cast<int>(UniformIndex(rng, spec.identity_dim))) = 1;
  if (spec.variant == FusionVariant::kA) {
    b.input.resize(rows, parent.input.cols() + spec.identity_dim);
    b.input << parent.input, z;
  } else {
    b.input = parent.input;
    b.identity = z;
  }
  return b;
}

// Largest |p_extended - p_parent| over `rows` random inputs.
inline double ExtensionMaxAbsDiff(const DnnModel &parent, const IdentityExtension &ext, int rows,
                                  uint64_t seed) {
  const DnnModel extended = ExtendForIdentity(parent, ext);
  const Batch<float> base = RandomBatch<float>(parent.spec, rows, seed);
  const Batch<float> with_id = WithIdentity(base, extended.spec, DeriveSeed(seed, "identity"));
  return (Forward(extended, with_id) - Forward(parent, base)).cwiseAbs().maxCoeff();
}

inline double ExtensionArgmaxAgreement(const DnnModel &parent, const IdentityExtension &ext,
                                       int rows, uint64_t seed) {
  const DnnModel extended = ExtendForIdentity(parent, ext);
  const Batch<float> base = RandomBatch<float>(parent.spec, rows, seed);
  const Batch<float> with_id = WithIdentity(base, extended.spec, DeriveSeed(seed, "identity"));
  const Mat<float> a = Forward(parent, base), b = Forward(extended, with_id);
  int agree = 0;
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    Eigen::Index ia, ib;
    a.row(r).maxCoeff(&ia);
    b.row(r).maxCoeff(&ib);
    agree += ia == ib;
  }
  return static_cast<double>(agree) / static_cast<double>(a.rows());
}

// 100 labelled log-mel frames drawn evenly from a small synthetic corpus.
inline FrameDataset SyntheticFrames(int num_frames, uint64_t seed) {
  SyntheticSpec spec;
  spec.utterances_per_speaker = 2;
  spec.visual = false;
  spec.seed = seed;
  const SyntheticCorpus corpus = SynthesizeCorpus(spec);
  FrameDataset all;
  all.num_speakers = spec.num_speakers;
  const LogMelConfig logmel;
  for (size_t u = 0; u < corpus.utterances.size(); ++u) {
    const Utterance &utt = corpus.utterances[u];
    const FeatureMatrix feats = AcousticFeatures(utt.wave, logmel, 5);
    const std::vector<int> labels = AlignmentToLabels(utt.alignment);
    FrameDataset one;
    one.acoustic = feats.cast<float>();
    one.label = labels;
    one.speaker.assign(labels.size(), utt.speaker_id);
    one.utterance.assign(labels.size(), static_cast<int>(u));
    one.visual_row.assign(labels.size(), -1);
    one.num_speakers = spec.num_speakers;
    AppendFrames(&all, one);
  }
  std::vector<int> pick;
  for (int i = 0; i < num_frames; ++i)
    pick.push_back(static_cast<int>(static_cast<long>(i) * all.NumFrames() / num_frames));
  return SelectFrames(all, pick);
}

// Frame accuracy after training a 4x64 audio-only model on the frames themselves.
inline double OverfitAccuracy(const FrameDataset &frames, int epochs, uint64_t seed) {
  ArchitectureSpec spec;
  spec.acoustic_dim = static_cast<int>(frames.acoustic.cols());
  spec.hidden_width = 64;
  spec.num_hidden_layers = 4;
  spec.output_labels = 1 + *std::max_element(frames.label.begin(), frames.label.end());
  TrainConfig cfg;
  cfg.learning_rate = 0.01;
  cfg.batch_size = 128;
  cfg.max_epochs = epochs;
  cfg.patience = epochs;
  cfg.seed = seed;
  const TrainResult r = TrainModel(InitModel<float>(spec, seed), frames, frames, cfg);
  return Evaluate(r.model, frames).accuracy;
}

}  // namespace testing
}  // namespace avst

#endif  // AVST_TESTS_SUPPORT_NNET_CHECKS_H_

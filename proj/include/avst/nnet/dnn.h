// include/avst/nnet/dnn.h

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

#ifndef AVST_NNET_DNN_H_
#define AVST_NNET_DNN_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "avst/dsp/feature-matrix.h"
#include "avst/nnet/architecture.h"

namespace avst {

template <typename Real>
using Mat = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using Vec = Eigen::Matrix<Real, Eigen::Dynamic, 1>;

/// y = W x + b, W is out x in.
template <typename Real>
struct DenseLayer {
  Mat<Real> weight;
  Vec<Real> bias;
};

/// Trainable parameters.  Gradients and freeze masks reuse the same shape.
template <typename Real>
struct DnnParameters {
  std::optional<DenseLayer<Real>> embedding;  // variant B identity embedding
  std::vector<DenseLayer<Real>> hidden;       // ReLU layers
  DenseLayer<Real> output;                    // softmax layer

  /// Calls f(Mat&) for every weight matrix and f(Vec&) for every bias, in
  /// declaration order (embedding, hidden..., output).
  template <typename F>
  void ForEach(F &&f);
  template <typename F>
  void ForEach(F &&f) const;
  /// Same-shaped zero/one/constant copies.
  DnnParameters Filled(Real value) const;
  bool SameShape(const DnnParameters &other) const;
};

template <typename Real>
struct BasicDnnModel {
  ArchitectureSpec spec;
  DnnParameters<Real> params;
  std::optional<Eigen::VectorXd> priors;  // label priors for hybrid decoding
  std::string provenance;                 // e.g. "si", "st:A", "sd:3"
};

using DnnModel = BasicDnnModel<float>;

/// Rows are frames.  `input` has spec.BatchInputDim() columns; `identity`
/// has spec.BatchIdentityDim() columns (zero for SI models and variant A,
/// whose identity columns sit at the end of `input`).
template <typename Real>
struct Batch {
  Mat<Real> input;
  Mat<Real> identity;
  std::vector<int> labels;

  Eigen::Index Rows() const { return input.rows(); }
};

/// Weights uniform in +-sqrt(6 / fan_in), biases zero; the variant-B
/// embedding is drawn the same way.  Throws UsageError for an invalid spec.
template <typename Real>
BasicDnnModel<Real> InitModel(const ArchitectureSpec &spec, uint64_t seed);

/// Softmax posteriors, rows x K.  Throws DataError on dimension mismatches.
template <typename Real>
Mat<Real> Forward(const BasicDnnModel<Real> &model, const Batch<Real> &batch);

/// Mean cross-entropy over the batch and its gradient for every parameter.
/// Throws DataError if a label is outside [0, K).
template <typename Real>
double LossAndGradients(const BasicDnnModel<Real> &model, const Batch<Real> &batch,
                        DnnParameters<Real> *grads);

/// Mean cross-entropy only.
template <typename Real>
double Loss(const BasicDnnModel<Real> &model, const Batch<Real> &batch);

/// p <- p - lr * g for every parameter (times `mask` elementwise when given).
/// Throws DataError on shape mismatch.
template <typename Real>
void SgdStep(BasicDnnModel<Real> *model, const DnnParameters<Real> &grads, Real lr,
             const DnnParameters<Real> *mask = nullptr);

struct IdentityExtension {
  FusionVariant variant = FusionVariant::kA;
  int num_speakers = 34;
  int embed_dim = 8;
  int injection_layer = 1;
  bool append_hidden_layer = false;
  double near_identity_noise = 1e-3;
  uint64_t seed = 1;
};

/// Widens a speaker-independent model to take speaker identity.  Every copied
/// parameter keeps its value and the new identity pathway starts at zero:
///   A: zero columns appended to layer 1 for the identity vector;
///   B: a randomly initialised embedding plus zero columns for its output;
///   C: zero columns appended to hidden layer `injection_layer + 1`.
/// So the extended model computes exactly the parent's function for every
/// identity vector.  With `append_hidden_layer`, a further ReLU layer
/// (identity weights plus uniform noise of +-`near_identity_noise`, zero
/// bias) is added after the last hidden layer; because its input is
/// nonnegative it only perturbs the parent's outputs slightly.
/// Throws UsageError if the parent already has an identity input.
template <typename Real>
BasicDnnModel<Real> ExtendForIdentity(const BasicDnnModel<Real> &si_model,
                                      const IdentityExtension &ext);

/// Appends one near-identity hidden layer without touching the input side.
/// Used for speaker-dependent AV adaptation.
template <typename Real>
BasicDnnModel<Real> AppendNearIdentityLayer(const BasicDnnModel<Real> &model,
                                            double noise, uint64_t seed);

/// Ones on parameters created by ExtendForIdentity / AppendNearIdentityLayer
/// relative to `parent`, zeros on parameters copied from it.
template <typename Real>
DnnParameters<Real> NewParameterMask(const BasicDnnModel<Real> &extended,
                                     const ArchitectureSpec &parent);

/// Row t is Forward of frame t; returned in double precision.
template <typename Real>
FeatureMatrix PredictPosteriors(const BasicDnnModel<Real> &model, const Batch<Real> &batch);

/// Precision conversion (e.g. a float model to double for gradient checks).
template <typename To, typename From>
BasicDnnModel<To> CastModel(const BasicDnnModel<From> &model);

template <typename To, typename From>
Batch<To> CastBatch(const Batch<From> &batch);

// -------------------------------------------------------------------------

template <typename Real>
template <typename F>
void DnnParameters<Real>::ForEach(F &&f) {
  if (embedding) {
    f(embedding->weight);
    f(embedding->bias);
  }
  for (auto &layer : hidden) {
    f(layer.weight);
    f(layer.bias);
  }
  f(output.weight);
  f(output.bias);
}

template <typename Real>
template <typename F>
void DnnParameters<Real>::ForEach(F &&f) const {
  if (embedding) {
    f(embedding->weight);
    f(embedding->bias);
  }
  for (const auto &layer : hidden) {
    f(layer.weight);
    f(layer.bias);
  }
  f(output.weight);
  f(output.bias);
}

}  // namespace avst

#endif  // AVST_NNET_DNN_H_

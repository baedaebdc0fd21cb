// src/nnet/dnn.cc

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

#include "avst/nnet/dnn.h"

#include <cmath>

#include "avst/base/error.h"
#include "avst/base/random.h"

namespace avst {

namespace {

template <typename Real>
DenseLayer<Real> UniformLayer(int out, int in, Rng &rng) {
  DenseLayer<Real> layer;
  const double bound = std::sqrt(6.0 / in);
  layer.weight.resize(out, in);
  for (int c = 0; c < in; ++c)
    for (int r = 0; r < out; ++r)
      layer.weight(r, c) = static_cast<Real>(bound * (2.0 * UniformUnit(rng) - 1.0));
  layer.bias = Vec<Real>::Zero(out);
  return layer;
}

template <typename Real>
void AppendZeroColumns(Mat<Real> *w, int extra) {
  Mat<Real> wider = Mat<Real>::Zero(w->rows(), w->cols() + extra);
  wider.leftCols(w->cols()) = *w;
  *w = std::move(wider);
}

template <typename Real>
Mat<Real> Affine(const Mat<Real> &x, const DenseLayer<Real> &layer) {
  Mat<Real> z = x * layer.weight.transpose();
  z.rowwise() += layer.bias.transpose();
  return z;
}

// Affine map whose input splits into leading columns and an identity block.
// Summing the two products separately keeps the leading product identical to
// that of a model without the identity block.
template <typename Real>
Mat<Real> SplitAffine(const Mat<Real> &x, const DenseLayer<Real> &layer, Eigen::Index lead) {
  const Eigen::Index rest = x.cols() - lead;
  Mat<Real> z = x.leftCols(lead) * layer.weight.leftCols(lead).transpose();
  z.noalias() += x.rightCols(rest) * layer.weight.rightCols(rest).transpose();
  z.rowwise() += layer.bias.transpose();
  return z;
}

// Leading input columns of hidden layer k that do not carry identity
// information, or -1 when the layer sees no identity input.
inline Eigen::Index LeadingColumns(const ArchitectureSpec &spec, int k) {
  switch (spec.variant) {
    case FusionVariant::kA:
      return k == 0 ? spec.BatchInputDim() - spec.identity_dim : -1;
    case FusionVariant::kB:
      return k == 0 ? spec.BatchInputDim() : -1;
    case FusionVariant::kC:
      return k == spec.InjectionTarget() ? spec.hidden_width : -1;
    case FusionVariant::kNone:
      break;
  }
  return -1;
}

template <typename Real>
Mat<Real> HStack(const Mat<Real> &a, const Mat<Real> &b) {
  Mat<Real> out(a.rows(), a.cols() + b.cols());
  out.leftCols(a.cols()) = a;
  out.rightCols(b.cols()) = b;
  return out;
}

void CheckShape(const char *what, Eigen::Index got_rows, Eigen::Index got_cols,
                Eigen::Index rows, Eigen::Index cols) {
  if (got_rows != rows || got_cols != cols)
    throw DataError(std::string(what) + " has shape " + std::to_string(got_rows) + "x" +
                    std::to_string(got_cols) + ", expected " + std::to_string(rows) + "x" +
                    std::to_string(cols));
}

template <typename Real>
void CheckBatch(const ArchitectureSpec &spec, const Batch<Real> &batch, bool need_labels) {
  const Eigen::Index rows = batch.input.rows();
  CheckShape("batch input", rows, batch.input.cols(), rows, spec.BatchInputDim());
  const int id_dim = spec.BatchIdentityDim();
  if (id_dim > 0)
    CheckShape("batch identity", batch.identity.rows(), batch.identity.cols(), rows, id_dim);
  else if (batch.identity.size() != 0)
    throw DataError("batch carries an identity matrix but model " + spec.Describe() +
                    " takes none separately");
  if (need_labels && static_cast<Eigen::Index>(batch.labels.size()) != rows)
    throw DataError("batch has " + std::to_string(batch.labels.size()) + " labels for " +
                    std::to_string(rows) + " rows");
}

template <typename Real>
struct ForwardState {
  std::vector<Mat<Real>> inputs;  // inputs[k] feeds hidden[k]; inputs[L] feeds output
  std::vector<Mat<Real>> pre;     // hidden pre-activations
  Mat<Real> logits;
};

template <typename Real>
void RunForward(const BasicDnnModel<Real> &model, const Batch<Real> &batch,
                ForwardState<Real> *st) {
  const ArchitectureSpec &spec = model.spec;
  const auto &params = model.params;
  const int num_hidden = static_cast<int>(params.hidden.size());
  st->inputs.resize(num_hidden + 1);
  st->pre.resize(num_hidden);
  if (spec.variant == FusionVariant::kB)
    st->inputs[0] = HStack<Real>(batch.input, Affine<Real>(batch.identity, *params.embedding));
  else
    st->inputs[0] = batch.input;
  const int inject = spec.InjectionTarget();
  for (int k = 0; k < num_hidden; ++k) {
    const Eigen::Index lead = LeadingColumns(spec, k);
    st->pre[k] = lead < 0 ? Affine<Real>(st->inputs[k], params.hidden[k])
                          : SplitAffine<Real>(st->inputs[k], params.hidden[k], lead);
    Mat<Real> act = st->pre[k].cwiseMax(Real(0));
    if (k + 1 == inject)
      st->inputs[k + 1] = HStack<Real>(act, batch.identity);
    else
      st->inputs[k + 1] = std::move(act);
  }
  st->logits = Affine<Real>(st->inputs[num_hidden], params.output);
}

template <typename Real>
Mat<Real> Softmax(const Mat<Real> &logits) {
  Mat<Real> p = logits;
  for (Eigen::Index r = 0; r < p.rows(); ++r) {
    p.row(r).array() -= p.row(r).maxCoeff();
    p.row(r) = p.row(r).array().exp().matrix();
    p.row(r) /= p.row(r).sum();
  }
  return p;
}

template <typename Real>
double MeanCrossEntropy(const Mat<Real> &logits, const std::vector<int> &labels) {
  const Eigen::Index k = logits.cols();
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    const int y = labels[r];
    if (y < 0 || y >= k)
      throw DataError("label " + std::to_string(y) + " outside [0, " + std::to_string(k) + ")");
    const double mx = logits.row(r).maxCoeff();
    double sum = 0.0;
    for (Eigen::Index c = 0; c < k; ++c) sum += std::exp(static_cast<double>(logits(r, c)) - mx);
    total += mx + std::log(sum) - static_cast<double>(logits(r, y));
  }
  return logits.rows() ? total / logits.rows() : 0.0;
}

template <typename Real>
void DenseGrad(const Mat<Real> &delta, const Mat<Real> &input, DenseLayer<Real> *g) {
  g->weight.noalias() = delta.transpose() * input;
  g->bias = delta.colwise().sum().transpose();
}

template <typename Real>
bool LayerShapeEqual(const DenseLayer<Real> &a, const DenseLayer<Real> &b) {
  return a.weight.rows() == b.weight.rows() && a.weight.cols() == b.weight.cols() &&
         a.bias.size() == b.bias.size();
}

}  // namespace

template <typename Real>
DnnParameters<Real> DnnParameters<Real>::Filled(Real value) const {
  DnnParameters out = *this;
  out.ForEach([value](auto &m) { m.setConstant(value); });
  return out;
}

template <typename Real>
bool DnnParameters<Real>::SameShape(const DnnParameters &o) const {
  if (embedding.has_value() != o.embedding.has_value()) return false;
  if (embedding && !LayerShapeEqual(*embedding, *o.embedding)) return false;
  if (hidden.size() != o.hidden.size()) return false;
  for (size_t k = 0; k < hidden.size(); ++k)
    if (!LayerShapeEqual(hidden[k], o.hidden[k])) return false;
  return LayerShapeEqual(output, o.output);
}

template <typename Real>
BasicDnnModel<Real> InitModel(const ArchitectureSpec &spec, uint64_t seed) {
  spec.Validate();
  BasicDnnModel<Real> model;
  model.spec = spec;
  Rng rng(seed);
  if (spec.variant == FusionVariant::kB)
    model.params.embedding = UniformLayer<Real>(spec.identity_embed_dim, spec.identity_dim, rng);
  for (int k = 0; k < spec.num_hidden_layers; ++k)
    model.params.hidden.push_back(
        UniformLayer<Real>(spec.hidden_width, spec.HiddenInputDim(k), rng));
  model.params.output = UniformLayer<Real>(spec.output_labels, spec.hidden_width, rng);
  return model;
}

template <typename Real>
Mat<Real> Forward(const BasicDnnModel<Real> &model, const Batch<Real> &batch) {
  CheckBatch(model.spec, batch, false);
  ForwardState<Real> st;
  RunForward(model, batch, &st);
  return Softmax<Real>(st.logits);
}

template <typename Real>
double Loss(const BasicDnnModel<Real> &model, const Batch<Real> &batch) {
  CheckBatch(model.spec, batch, true);
  ForwardState<Real> st;
  RunForward(model, batch, &st);
  return MeanCrossEntropy<Real>(st.logits, batch.labels);
}

template <typename Real>
double LossAndGradients(const BasicDnnModel<Real> &model, const Batch<Real> &batch,
                        DnnParameters<Real> *grads) {
  CheckBatch(model.spec, batch, true);
  const ArchitectureSpec &spec = model.spec;
  const auto &params = model.params;
  ForwardState<Real> st;
  RunForward(model, batch, &st);
  const double loss = MeanCrossEntropy<Real>(st.logits, batch.labels);

  const int num_hidden = static_cast<int>(params.hidden.size());
  const Eigen::Index rows = batch.Rows();
  grads->hidden.resize(num_hidden);
  grads->embedding.reset();

  Mat<Real> delta = Softmax<Real>(st.logits);
  for (Eigen::Index r = 0; r < rows; ++r) delta(r, batch.labels[r]) -= Real(1);
  delta /= static_cast<Real>(std::max<Eigen::Index>(rows, 1));

  DenseGrad<Real>(delta, st.inputs[num_hidden], &grads->output);
  Mat<Real> upstream = delta * params.output.weight;
  for (int k = num_hidden - 1; k >= 0; --k) {
    // The identity columns injected for variant C have no upstream parameters,
    // so only the activation part of the input gradient propagates.
    if (k + 1 == spec.InjectionTarget())
      upstream = upstream.leftCols(spec.hidden_width).eval();
    Mat<Real> d_pre = upstream.cwiseProduct(
        (st.pre[k].array() > Real(0)).template cast<Real>().matrix());
    DenseGrad<Real>(d_pre, st.inputs[k], &grads->hidden[k]);
    if (k > 0 || spec.variant == FusionVariant::kB) upstream = d_pre * params.hidden[k].weight;
  }
  if (spec.variant == FusionVariant::kB) {
    const Mat<Real> d_embed = upstream.rightCols(spec.identity_embed_dim);
    grads->embedding.emplace();
    DenseGrad<Real>(d_embed, batch.identity, &*grads->embedding);
  }
  return loss;
}

template <typename Real>
void SgdStep(BasicDnnModel<Real> *model, const DnnParameters<Real> &grads, Real lr,
             const DnnParameters<Real> *mask) {
  if (!model->params.SameShape(grads))
    throw DataError("gradient shapes do not match model " + model->spec.Describe());
  if (mask && !model->params.SameShape(*mask))
    throw DataError("freeze mask shapes do not match model " + model->spec.Describe());
  std::vector<const Mat<Real> *> gw;
  std::vector<const Vec<Real> *> gb;
  auto collect = [&](const auto &m) {
    if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Mat<Real>>)
      gw.push_back(&m);
    else
      gb.push_back(&m);
  };
  grads.ForEach(collect);
  std::vector<const Mat<Real> *> mw;
  std::vector<const Vec<Real> *> mb;
  if (mask)
    mask->ForEach([&](const auto &m) {
      if constexpr (std::is_same_v<std::decay_t<decltype(m)>, Mat<Real>>)
        mw.push_back(&m);
      else
        mb.push_back(&m);
    });
  size_t iw = 0, ib = 0;
  model->params.ForEach([&](auto &p) {
    if constexpr (std::is_same_v<std::decay_t<decltype(p)>, Mat<Real>>) {
      if (mask)
        p -= lr * gw[iw]->cwiseProduct(*mw[iw]);
      else
        p -= lr * *gw[iw];
      ++iw;
    } else {
      if (mask)
        p -= lr * gb[ib]->cwiseProduct(*mb[ib]);
      else
        p -= lr * *gb[ib];
      ++ib;
    }
  });
}

template <typename Real>
BasicDnnModel<Real> AppendNearIdentityLayer(const BasicDnnModel<Real> &model, double noise,
                                            uint64_t seed) {
  BasicDnnModel<Real> out = model;
  const int width = model.spec.hidden_width;
  Rng rng(DeriveSeed(seed, "near-identity"));
  DenseLayer<Real> layer;
  layer.weight = Mat<Real>::Identity(width, width);
  for (int c = 0; c < width; ++c)
    for (int r = 0; r < width; ++r)
      layer.weight(r, c) += static_cast<Real>(noise * (2.0 * UniformUnit(rng) - 1.0));
  layer.bias = Vec<Real>::Zero(width);
  out.params.hidden.push_back(std::move(layer));
  out.spec.num_hidden_layers += 1;
  out.spec.Validate();
  return out;
}

template <typename Real>
BasicDnnModel<Real> ExtendForIdentity(const BasicDnnModel<Real> &si_model,
                                      const IdentityExtension &ext) {
  const ArchitectureSpec &parent = si_model.spec;
  if (HasIdentity(parent.modality) || parent.variant != FusionVariant::kNone)
    throw UsageError("ExtendForIdentity needs a speaker-independent model, got " +
                     parent.Describe());
  if (ext.variant == FusionVariant::kNone)
    throw UsageError("ExtendForIdentity needs variant A, B or C");

  BasicDnnModel<Real> out = si_model;
  ArchitectureSpec &spec = out.spec;
  spec.modality = WithIdentity(parent.modality);
  spec.variant = ext.variant;
  spec.identity_dim = ext.num_speakers;
  spec.identity_embed_dim = ext.embed_dim;
  spec.injection_layer = ext.injection_layer;
  spec.Validate();

  switch (ext.variant) {
    case FusionVariant::kA:
      AppendZeroColumns(&out.params.hidden[0].weight, ext.num_speakers);
      break;
    case FusionVariant::kB: {
      Rng rng(DeriveSeed(ext.seed, "identity-embedding"));
      out.params.embedding = UniformLayer<Real>(ext.embed_dim, ext.num_speakers, rng);
      AppendZeroColumns(&out.params.hidden[0].weight, ext.embed_dim);
      break;
    }
    case FusionVariant::kC:
      AppendZeroColumns(&out.params.hidden[ext.injection_layer].weight, ext.num_speakers);
      break;
    case FusionVariant::kNone:
      break;
  }
  if (ext.append_hidden_layer) out = AppendNearIdentityLayer(out, ext.near_identity_noise, ext.seed);
  return out;
}

template <typename Real>
DnnParameters<Real> NewParameterMask(const BasicDnnModel<Real> &extended,
                                     const ArchitectureSpec &parent) {
  DnnParameters<Real> mask = extended.params.Filled(Real(1));
  for (int k = 0; k < parent.num_hidden_layers && k < static_cast<int>(mask.hidden.size()); ++k) {
    auto &layer = mask.hidden[k];
    layer.weight.leftCols(parent.HiddenInputDim(k)).setZero();
    layer.bias.setZero();
  }
  mask.output.weight.setZero();
  mask.output.bias.setZero();
  if (mask.embedding && parent.variant == FusionVariant::kB) {
    mask.embedding->weight.setZero();
    mask.embedding->bias.setZero();
  }
  return mask;
}

template <typename Real>
FeatureMatrix PredictPosteriors(const BasicDnnModel<Real> &model, const Batch<Real> &batch) {
  return Forward(model, batch).template cast<double>();
}

template <typename To, typename From>
BasicDnnModel<To> CastModel(const BasicDnnModel<From> &m) {
  auto cast_layer = [](const DenseLayer<From> &l) {
    return DenseLayer<To>{l.weight.template cast<To>(), l.bias.template cast<To>()};
  };
  BasicDnnModel<To> out;
  out.spec = m.spec;
  out.priors = m.priors;
  out.provenance = m.provenance;
  if (m.params.embedding) out.params.embedding = cast_layer(*m.params.embedding);
  for (const auto &l : m.params.hidden) out.params.hidden.push_back(cast_layer(l));
  out.params.output = cast_layer(m.params.output);
  return out;
}

template <typename To, typename From>
Batch<To> CastBatch(const Batch<From> &b) {
  return Batch<To>{b.input.template cast<To>(), b.identity.template cast<To>(), b.labels};
}

#define AVST_INSTANTIATE_DNN(Real)                                                          \
  template struct DnnParameters<Real>;                                                      \
  template BasicDnnModel<Real> InitModel<Real>(const ArchitectureSpec &, uint64_t);         \
  template Mat<Real> Forward<Real>(const BasicDnnModel<Real> &, const Batch<Real> &);       \
  template double Loss<Real>(const BasicDnnModel<Real> &, const Batch<Real> &);             \
  template double LossAndGradients<Real>(const BasicDnnModel<Real> &, const Batch<Real> &,  \
                                         DnnParameters<Real> *);                            \
  template void SgdStep<Real>(BasicDnnModel<Real> *, const DnnParameters<Real> &, Real,     \
                              const DnnParameters<Real> *);                                 \
  template BasicDnnModel<Real> ExtendForIdentity<Real>(const BasicDnnModel<Real> &,         \
                                                       const IdentityExtension &);          \
  template BasicDnnModel<Real> AppendNearIdentityLayer<Real>(const BasicDnnModel<Real> &,   \
                                                             double, uint64_t);             \
  template DnnParameters<Real> NewParameterMask<Real>(const BasicDnnModel<Real> &,          \
                                                      const ArchitectureSpec &);            \
  template FeatureMatrix PredictPosteriors<Real>(const BasicDnnModel<Real> &,               \
                                                 const Batch<Real> &);

AVST_INSTANTIATE_DNN(float)
AVST_INSTANTIATE_DNN(double)

template BasicDnnModel<double> CastModel<double, float>(const BasicDnnModel<float> &);
template BasicDnnModel<float> CastModel<float, double>(const BasicDnnModel<double> &);
template Batch<double> CastBatch<double, float>(const Batch<float> &);
template Batch<float> CastBatch<float, double>(const Batch<double> &);

}  // namespace avst

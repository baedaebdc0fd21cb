// src/nnet/train.cc

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

#include "avst/nnet/train.h"

#include <cmath>
#include <numeric>

#include "avst/base/error.h"
#include "avst/base/random.h"

namespace avst {

namespace {

constexpr int kEvalChunk = 1024;

bool AllFinite(const DnnParameters<float> &params) {
  bool ok = true;
  params.ForEach([&](const auto &m) { ok = ok && m.allFinite(); });
  return ok;
}

}  // namespace

void TrainConfig::Validate() const {
  if (!(learning_rate > 0.0) || !std::isfinite(learning_rate))
    throw UsageError("train.learning_rate must be positive");
  if (batch_size < 1) throw UsageError("train.batch_size must be at least 1");
  if (max_epochs < 0) throw UsageError("train.max_epochs must be nonnegative");
  if (patience < 1) throw UsageError("train.patience must be at least 1");
}

FeatureMatrix PredictFrames(const DnnModel &model, const FrameDataset &data,
                            std::span<const int> frames) {
  std::vector<int> all;
  if (frames.empty()) {
    all.resize(data.NumFrames());
    std::iota(all.begin(), all.end(), 0);
    frames = all;
  }
  FeatureMatrix out(static_cast<Eigen::Index>(frames.size()), model.spec.output_labels);
  Batch<float> batch;
  for (size_t start = 0; start < frames.size(); start += kEvalChunk) {
    const size_t n = std::min<size_t>(kEvalChunk, frames.size() - start);
    FillBatch(data, model.spec, frames.subspan(start, n), &batch);
    out.middleRows(static_cast<Eigen::Index>(start), static_cast<Eigen::Index>(n)) =
        PredictPosteriors(model, batch);
  }
  return out;
}

EvalStats Evaluate(const DnnModel &model, const FrameDataset &data) {
  EvalStats stats;
  const int n = data.NumFrames();
  if (n == 0) return stats;
  const FeatureMatrix post = PredictFrames(model, data);
  double loss = 0.0;
  int correct = 0;
  for (int i = 0; i < n; ++i) {
    Eigen::Index best;
    post.row(i).maxCoeff(&best);
    if (best == data.label[i]) ++correct;
    loss -= std::log(std::max(post(i, data.label[i]), 1e-30));
  }
  stats.loss = loss / n;
  stats.accuracy = static_cast<double>(correct) / n;
  return stats;
}

TrainResult TrainModel(const DnnModel &init, const FrameDataset &train,
                       const FrameDataset &valid, const TrainConfig &cfg,
                       const DnnParameters<float> *mask,
                       const std::function<void(const EpochStats &)> &on_epoch) {
  cfg.Validate();
  if (train.NumFrames() == 0) throw DataError("training set is empty");
  const bool use_valid = valid.NumFrames() > 0;
  const FrameDataset &monitor = use_valid ? valid : train;

  TrainResult result;
  result.model = init;
  DnnModel model = init;
  double best = Evaluate(model, monitor).loss;
  result.initial_valid_loss = best;
  int since_best = 0;

  std::vector<int> order(train.NumFrames());
  std::iota(order.begin(), order.end(), 0);
  Batch<float> batch;
  DnnParameters<float> grads;
  const float lr = static_cast<float>(cfg.learning_rate);

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    Rng rng(DeriveSeed(cfg.seed, static_cast<uint64_t>(epoch)));
    std::vector<int> perm = RandomPermutation(rng, train.NumFrames());
    for (size_t i = 0; i < perm.size(); ++i) order[i] = perm[i];
    double loss_sum = 0.0;
    for (size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const size_t n = std::min<size_t>(cfg.batch_size, order.size() - start);
      FillBatch(train, model.spec, std::span<const int>(order).subspan(start, n), &batch);
      const double loss = LossAndGradients(model, batch, &grads);
      if (!std::isfinite(loss))
        throw NumericError("non-finite training loss in epoch " + std::to_string(epoch));
      loss_sum += loss * static_cast<double>(n);
      SgdStep(&model, grads, lr, mask);
    }
    if (!AllFinite(model.params))
      throw NumericError("non-finite parameters after epoch " + std::to_string(epoch));
    EpochStats stats;
    stats.epoch = epoch;
    stats.train_loss = loss_sum / static_cast<double>(order.size());
    const EvalStats ev = Evaluate(model, monitor);
    stats.valid_loss = ev.loss;
    stats.valid_accuracy = ev.accuracy;
    result.curve.push_back(stats);
    if (on_epoch) on_epoch(stats);
    if (ev.loss < best) {
      best = ev.loss;
      result.model = model;
      result.best_epoch = epoch;
      since_best = 0;
    } else if (++since_best >= cfg.patience) {
      break;
    }
  }
  return result;
}

}  // namespace avst

// include/avst/nnet/train.h

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

#ifndef AVST_NNET_TRAIN_H_
#define AVST_NNET_TRAIN_H_

#include <cstdint>
#include <functional>
#include <vector>

#include "avst/nnet/dnn.h"
#include "avst/nnet/frame-dataset.h"

namespace avst {

struct TrainConfig {
  double learning_rate = 0.01;
  int batch_size = 128;
  int max_epochs = 30;
  int patience = 5;        // epochs without validation-loss improvement
  uint64_t seed = 1;
  bool freeze_copied = false;  // adaptation: update only new parameters

  /// Throws UsageError naming the offending field.
  void Validate() const;
};

struct EpochStats {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double valid_accuracy = 0.0;
};

struct TrainResult {
  DnnModel model;  // best-validation checkpoint
  std::vector<EpochStats> curve;
  int best_epoch = 0;  // 0 means the initial model was never improved upon
  double initial_valid_loss = 0.0;
};

struct EvalStats {
  double loss = 0.0;
  double accuracy = 0.0;
};

/// Mean cross-entropy and frame accuracy over every frame of `data`.
EvalStats Evaluate(const DnnModel &model, const FrameDataset &data);

/// Row-wise posteriors for `frames` of `data` (all frames when empty).
FeatureMatrix PredictFrames(const DnnModel &model, const FrameDataset &data,
                            std::span<const int> frames = {});

/// Minibatch SGD with a seeded per-epoch shuffle.  After every epoch the
/// validation loss is measured; the best checkpoint is kept and training
/// stops after `patience` epochs without improvement.  With an empty
/// validation set the training loss plays that role.  `mask`, when given,
/// scales each gradient elementwise.  Throws NumericError on a non-finite
/// loss and DataError on an empty training set.
TrainResult TrainModel(const DnnModel &init, const FrameDataset &train,
                       const FrameDataset &valid, const TrainConfig &cfg,
                       const DnnParameters<float> *mask = nullptr,
                       const std::function<void(const EpochStats &)> &on_epoch = {});

}  // namespace avst

#endif  // AVST_NNET_TRAIN_H_

// include/avst/pipeline/training.h

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

#ifndef AVST_PIPELINE_TRAINING_H_
#define AVST_PIPELINE_TRAINING_H_

#include <cstdint>
#include <functional>

#include "avst/nnet/train.h"
#include "avst/pipeline/corpus-data.h"
#include "avst/pipeline/experiment-config.h"

namespace avst {

using EpochLogger = std::function<void(const EpochStats &)>;

/// Speaker-independent topology for `modality` (kA or kAV) over `data`.
ArchitectureSpec SiArchitecture(const ExperimentConfig &cfg, const CorpusData &data,
                                Modality modality);

/// Width of the identity one-hot used by identity models.
int IdentityDim(const ExperimentConfig &cfg, const CorpusData &data);

/// Trains from a seeded random init with cfg.train; returns the best
/// validation checkpoint with label priors from `train`.  Throws DataError on
/// an empty training set.
TrainResult TrainSpeakerIndependent(const ExperimentConfig &cfg, const CorpusData &data,
                                    const PreparedSet &train, const PreparedSet &valid,
                                    Modality modality, uint64_t seed,
                                    const EpochLogger &log = {});

/// Extends `si` with the identity pathway of `variant` (plus a fifth hidden
/// layer for AV models when configured) and continues training with cfg.adapt
/// on every speaker's frames, each carrying its target speaker's one-hot.
TrainResult AdaptSpeakerTargeted(const ExperimentConfig &cfg, const CorpusData &data,
                                 const DnnModel &si, FusionVariant variant,
                                 const PreparedSet &train, const PreparedSet &valid,
                                 uint64_t seed, const EpochLogger &log = {});

/// Continues training `si` on `speaker_id`'s frames only (AV models gain a
/// near-identity fifth layer when configured).  Throws DataError if the
/// speaker has no training frames.
TrainResult AdaptSpeakerDependent(const ExperimentConfig &cfg, const DnnModel &si,
                                  int speaker_id, const PreparedSet &train,
                                  const PreparedSet &valid, uint64_t seed,
                                  const EpochLogger &log = {});

}  // namespace avst

#endif  // AVST_PIPELINE_TRAINING_H_

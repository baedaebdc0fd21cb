// src/pipeline/training.cc

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

#include "avst/pipeline/training.h"

#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/dsp/visual.h"

namespace avst {

namespace {

void AttachPriors(TrainResult *result, const PreparedSet &train) {
  result->model.priors = EstimatePriors(train.frames, result->model.spec.output_labels);
}

}  // namespace

int IdentityDim(const ExperimentConfig &cfg, const CorpusData &data) {
  return cfg.architecture.identity_dim > 0 ? cfg.architecture.identity_dim
                                           : data.manifest.num_speakers;
}

ArchitectureSpec SiArchitecture(const ExperimentConfig &cfg, const CorpusData &data,
                                Modality modality) {
  if (HasIdentity(modality))
    throw UsageError("speaker-independent models take modality A or AV");
  if (HasVisual(modality) && !data.has_visual)
    throw DataError("audio-visual model requested but the corpus has no visual tracks");
  ArchitectureSpec spec;
  spec.modality = modality;
  spec.variant = FusionVariant::kNone;
  spec.num_hidden_layers = cfg.architecture.num_hidden_layers;
  spec.hidden_width = cfg.architecture.hidden_width;
  spec.output_labels = data.num_phonemes;
  spec.identity_embed_dim = cfg.architecture.identity_embed_dim;
  spec.injection_layer = cfg.architecture.injection_layer;
  spec.acoustic_dim = cfg.logmel.num_bins * (2 * cfg.context_radius + 1);
  spec.visual_dim = kRoiDim;
  spec.identity_dim = IdentityDim(cfg, data);
  spec.Validate();
  return spec;
}

TrainResult TrainSpeakerIndependent(const ExperimentConfig &cfg, const CorpusData &data,
                                    const PreparedSet &train, const PreparedSet &valid,
                                    Modality modality, uint64_t seed, const EpochLogger &log) {
  if (train.frames.NumFrames() == 0) throw DataError("speaker-independent training set is empty");
  DnnModel init = InitModel<float>(SiArchitecture(cfg, data, modality), DeriveSeed(seed, "init"));
  init.provenance = "si";
  TrainConfig tc = cfg.train;
  tc.seed = DeriveSeed(seed, "shuffle");
  TrainResult result = TrainModel(init, train.frames, valid.frames, tc, nullptr, log);
  AttachPriors(&result, train);
  return result;
}

TrainResult AdaptSpeakerTargeted(const ExperimentConfig &cfg, const CorpusData &data,
                                 const DnnModel &si, FusionVariant variant,
                                 const PreparedSet &train, const PreparedSet &valid,
                                 uint64_t seed, const EpochLogger &log) {
  if (variant == FusionVariant::kNone)
    throw UsageError("speaker-targeted adaptation needs variant A, B or C");
  if (si.spec.variant != FusionVariant::kNone)
    throw UsageError("speaker-targeted adaptation starts from a speaker-independent model");
  if (train.frames.NumFrames() == 0) throw DataError("speaker-targeted training set is empty");
  IdentityExtension ext;
  ext.variant = variant;
  ext.num_speakers = IdentityDim(cfg, data);
  ext.embed_dim = cfg.architecture.identity_embed_dim;
  ext.injection_layer = cfg.architecture.injection_layer;
  ext.append_hidden_layer = HasVisual(si.spec.modality) && cfg.architecture.av_extra_layer;
  ext.near_identity_noise = cfg.architecture.near_identity_noise;
  ext.seed = DeriveSeed(seed, "extend");
  DnnModel init = ExtendForIdentity(si, ext);
  init.provenance = "st:" + VariantName(variant);
  TrainConfig tc = cfg.adapt;
  tc.seed = DeriveSeed(seed, "shuffle");
  DnnParameters<float> mask;
  if (tc.freeze_copied) mask = NewParameterMask(init, si.spec);
  TrainResult result =
      TrainModel(init, train.frames, valid.frames, tc, tc.freeze_copied ? &mask : nullptr, log);
  AttachPriors(&result, train);
  return result;
}

TrainResult AdaptSpeakerDependent(const ExperimentConfig &cfg, const DnnModel &si,
                                  int speaker_id, const PreparedSet &train,
                                  const PreparedSet &valid, uint64_t seed,
                                  const EpochLogger &log) {
  if (si.spec.variant != FusionVariant::kNone)
    throw UsageError("speaker-dependent adaptation starts from a speaker-independent model");
  const PreparedSet own_train = SelectSpeaker(train, speaker_id);
  if (own_train.frames.NumFrames() == 0)
    throw DataError("speaker " + std::to_string(speaker_id) + " has no training utterances");
  const PreparedSet own_valid = SelectSpeaker(valid, speaker_id);
  DnnModel init = si;
  if (HasVisual(si.spec.modality) && cfg.architecture.av_extra_layer)
    init = AppendNearIdentityLayer(si, cfg.architecture.near_identity_noise,
                                   DeriveSeed(seed, "extend"));
  init.provenance = "sd:" + std::to_string(speaker_id);
  TrainConfig tc = cfg.adapt;
  tc.seed = DeriveSeed(seed, "shuffle");
  DnnParameters<float> mask;
  if (tc.freeze_copied) mask = NewParameterMask(init, si.spec);
  TrainResult result = TrainModel(init, own_train.frames, own_valid.frames, tc,
                                  tc.freeze_copied ? &mask : nullptr, log);
  AttachPriors(&result, own_train);
  return result;
}

}  // namespace avst

// include/avst/pipeline/experiment-config.h

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

#ifndef AVST_PIPELINE_EXPERIMENT_CONFIG_H_
#define AVST_PIPELINE_EXPERIMENT_CONFIG_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avst/corpus/splits.h"
#include "avst/corpus/synthetic.h"
#include "avst/dsp/log-mel.h"
#include "avst/nnet/architecture.h"
#include "avst/nnet/train.h"

namespace avst {

enum class ModelKind { kSI, kSTA, kSTB, kSTC, kSD };
enum class Condition { kOneSpeaker, kTwoSpeaker };

std::string ModelKindName(ModelKind k);  // "si", "st-a", "st-b", "st-c", "sd"
std::string ConditionName(Condition c);  // "one", "two"
ModelKind ParseModelKind(const std::string &s);
Condition ParseCondition(const std::string &s);
/// Fusion variant of a speaker-targeted kind, kNone otherwise.
FusionVariant KindVariant(ModelKind k);

/// One entry of the experiment matrix.  `modality` is kA or kAV; the identity
/// input, if any, follows from `kind`.
struct Cell {
  ModelKind kind = ModelKind::kSI;
  Modality modality = Modality::kA;
  Condition condition = Condition::kTwoSpeaker;

  /// "si/a/two" style name.
  std::string Name() const;
  /// The speaker-independent cell this one is adapted from.
  Cell Parent() const;
  bool operator==(const Cell &) const = default;
};

/// Throws UsageError on a malformed name.
Cell ParseCell(const std::string &name);

/// Every {model} x {a, av} x {one, two} combination in dependency order.
std::vector<Cell> FullMatrix();

struct CorpusSource {
  /// Set for the built-in generator; otherwise `manifest` (and optionally
  /// `splits`) name files on disk.
  std::optional<SyntheticSpec> synthetic;
  std::string manifest;
  std::string splits;
  std::string grammar;  // with `manifest`; optional for `synthetic`
  std::string lexicon;
  int num_phonemes = 0;  // labels K; 0 = 1 + the largest lexicon phoneme
};

struct ArchitectureTemplate {
  int num_hidden_layers = 4;
  int hidden_width = 64;
  int identity_embed_dim = 8;
  int injection_layer = 1;
  int identity_dim = 0;          // 0 = manifest num_speakers
  bool av_extra_layer = true;    // fifth hidden layer for adapted AV models
  double near_identity_noise = 1e-3;
};

struct DecoderSettings {
  bool use_priors = true;
  double self_loop_prob = 0.5;
};

inline TrainConfig DefaultTrain(int max_epochs, int patience = 5) {
  TrainConfig t;
  t.max_epochs = max_epochs;
  t.patience = patience;
  return t;
}

struct ExperimentConfig {
  uint64_t seed = 1;
  CorpusSource corpus;
  SplitRatios split_ratios{0.5, 0.1, 0.3};
  uint64_t split_seed = 1;
  uint64_t mixture_seed = 7;
  double mixture_gain = 0.5;
  LogMelConfig logmel;
  int context_radius = 5;
  ArchitectureTemplate architecture;
  TrainConfig train = DefaultTrain(20);
  // Adaptation runs its whole budget and keeps the best-validation epoch: the
  // identity pathway often plateaus for several epochs before it helps.
  TrainConfig adapt = DefaultTrain(40, 40);
  DecoderSettings decoder;
  std::vector<Cell> cells;       // empty = FullMatrix()
  std::vector<int> sd_speakers;  // empty = every speaker

  /// Throws UsageError naming the offending field.
  void Validate() const;
  /// Requested cells with the default applied.
  std::vector<Cell> ResolvedCells() const;
};

/// Parses a JSON config.  Unknown keys are rejected with a UsageError that
/// names them; relative paths resolve against `base_dir`.
ExperimentConfig ParseExperimentConfig(const std::string &text, const std::string &source,
                                       const std::string &base_dir);
ExperimentConfig LoadExperimentConfig(const std::string &path);
/// Fully resolved JSON (every default spelled out); parses back to an equal
/// config.
std::string FormatExperimentConfig(const ExperimentConfig &cfg);
/// 64-bit hash of the resolved config, as 16 hex digits.
std::string ConfigHash(const ExperimentConfig &cfg);

/// Default desk-scale experiment on the synthetic corpus.
ExperimentConfig DefaultSyntheticExperiment();

}  // namespace avst

#endif  // AVST_PIPELINE_EXPERIMENT_CONFIG_H_

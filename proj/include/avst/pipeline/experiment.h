// include/avst/pipeline/experiment.h

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

#ifndef AVST_PIPELINE_EXPERIMENT_H_
#define AVST_PIPELINE_EXPERIMENT_H_

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "avst/nnet/train.h"
#include "avst/pipeline/corpus-data.h"
#include "avst/pipeline/evaluation.h"
#include "avst/pipeline/experiment-config.h"

namespace avst {

/// Training record of one model inside a cell.
struct ModelTrace {
  std::string name;  // "si/a/two", "sd/a/two/3", ...
  uint64_t seed = 0;
  int best_epoch = 0;
  double initial_valid_loss = 0.0;
  std::vector<EpochStats> curve;
};

struct CellResult {
  Cell cell;
  uint64_t seed = 0;
  Evaluation eval;
  std::vector<ModelTrace> models;
};

struct ExperimentReport {
  std::string config_hash;
  int num_speakers = 0;
  std::vector<CellResult> cells;  // FullMatrix order

  /// nullptr when the cell was not run.
  const CellResult *Find(const Cell &cell) const;
};

struct RunOptions {
  /// Prepared features and checkpoints are stored here and reused when
  /// present; empty disables caching.
  std::string cache_dir;
  std::function<void(const std::string &)> log;
};

/// Seed of a cell, and of the speaker-dependent model for `speaker_id`.
uint64_t CellSeed(const ExperimentConfig &cfg, const Cell &cell);
uint64_t SpeakerSeed(uint64_t cell_seed, int speaker_id);

/// Speakers that get speaker-dependent models.
std::vector<int> SdSpeakers(const ExperimentConfig &cfg, const CorpusData &data);

/// Runs every requested cell: speaker-independent parents first (trained even
/// when not requested), then speaker-targeted and speaker-dependent
/// adaptations, each evaluated on the test split of its condition.
ExperimentReport RunMatrix(const ExperimentConfig &cfg, const RunOptions &opts = {});
ExperimentReport RunMatrix(const ExperimentConfig &cfg, const CorpusData &data,
                           const RunOptions &opts = {});

/// Table-style summary.
std::string FormatReportText(const ExperimentReport &report);
/// Machine-readable report: WER in percent at 0.1 precision, per-speaker
/// arrays, per-utterance S/D/I counts and training curves.
std::string FormatReportJson(const ExperimentReport &report);

/// Writes report.txt, report.json and config.resolved.json under `dir`.
void WriteReport(const std::string &dir, const ExperimentReport &report,
                 const ExperimentConfig &cfg);

}  // namespace avst

#endif  // AVST_PIPELINE_EXPERIMENT_H_

// include/avst/pipeline/corpus-data.h

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

#ifndef AVST_PIPELINE_CORPUS_DATA_H_
#define AVST_PIPELINE_CORPUS_DATA_H_

#include <map>
#include <string>
#include <vector>

#include "avst/corpus/manifest.h"
#include "avst/corpus/mixing.h"
#include "avst/corpus/splits.h"
#include "avst/decoder/grammar.h"
#include "avst/nnet/frame-dataset.h"
#include "avst/pipeline/experiment-config.h"

namespace avst {

/// Everything an experiment reads from the corpus, loaded once.
struct CorpusData {
  Manifest manifest;
  std::vector<Utterance> utterances;  // parallel to manifest.entries
  Grammar grammar;
  Lexicon lexicon;
  SplitSet splits;
  int num_phonemes = 0;
  bool has_visual = false;

  const Utterance &Get(const std::string &utt_id) const;

  std::map<std::string, int> index;  // utt_id -> position
};

/// Synthesises or loads the corpus, grammar, lexicon and splits named by
/// `cfg`.  Transcripts must be grammar-legal and alignments must expand to the
/// transcript's pronunciation.
CorpusData LoadCorpus(const ExperimentConfig &cfg);

/// Assembles a CorpusData from parts (validates like LoadCorpus).
CorpusData MakeCorpusData(Manifest manifest, std::vector<Utterance> utterances, Grammar grammar,
                          Lexicon lexicon, SplitSet splits, int num_phonemes);

/// Background partner for every utterance in `targets`, drawn from
/// `splits.background` (excluding the target's speaker).
std::vector<MixturePair> PairMixtures(const CorpusData &data,
                                      const std::vector<std::string> &targets, uint64_t seed);

/// Per-utterance bookkeeping inside a PreparedSet: frames
/// [first_frame, first_frame + num_frames) of `frames`.
struct PreparedUtterance {
  std::string utt_id;
  std::string background;  // empty for one-speaker audio
  int speaker_id = 0;
  std::vector<std::string> transcript;
  int first_frame = 0;
  int num_frames = 0;
};

struct PreparedSet {
  FrameDataset frames;
  std::vector<PreparedUtterance> utterances;
};

/// The waveform a model hears for `target`: the clean target, or the target
/// mixed with `background` and quantised to 16 bits.
Waveform ModelAudio(const CorpusData &data, const std::string &target,
                    const std::string &background, double gain);

/// Normalised, context-stacked log-mel features of one waveform.
FeatureMatrix AcousticFeatures(const Waveform &wave, const LogMelConfig &logmel,
                               int context_radius);

/// Features and target-alignment labels for one split under one condition.
/// The visual stream is always the target speaker's.  Throws DataError on an
/// empty split or when feature and alignment lengths differ.
PreparedSet PrepareSet(const CorpusData &data, const std::vector<std::string> &ids,
                       Condition condition, const ExperimentConfig &cfg);

/// Utterances of `set` spoken by `speaker_id`, frames renumbered.
PreparedSet SelectSpeaker(const PreparedSet &set, int speaker_id);

void WritePreparedSet(const std::string &path, const PreparedSet &set);
PreparedSet ReadPreparedSet(const std::string &path);

}  // namespace avst

#endif  // AVST_PIPELINE_CORPUS_DATA_H_

// include/avst/corpus/synthetic.h

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

#ifndef AVST_CORPUS_SYNTHETIC_H_
#define AVST_CORPUS_SYNTHETIC_H_

#include <cstdint>
#include <string>
#include <vector>

#include "avst/corpus/manifest.h"
#include "avst/decoder/grammar.h"

namespace avst {

/// Parameters of the desk-scale stand-in corpus.  Each phoneme segment is a
/// tone at speaker_base_hz[s] + phoneme_offset_hz[p]; the mouth-ROI track is a
/// dark ellipse whose width and height encode the phoneme being spoken.
struct SyntheticSpec {
  int num_speakers = 4;
  int num_phonemes = 6;
  /// Empty: 150 + speaker_spacing_hz * s.
  std::vector<double> speaker_base_hz;
  double speaker_spacing_hz = 70.0;
  /// Empty: phoneme_spacing_hz * p.
  std::vector<double> phoneme_offset_hz;
  double phoneme_spacing_hz = 400.0;
  int min_frames_per_phoneme = 6;
  int max_frames_per_phoneme = 12;
  int utterances_per_speaker = 500;
  int sample_rate = 16000;
  double hop_seconds = 0.010;
  double window_seconds = 0.025;
  double amplitude_min = 0.5;
  double amplitude_max = 0.9;
  double noise_stddev = 0.003;
  bool visual = true;
  double video_fps = 25.0;
  double pixel_noise = 0.08;
  Grammar grammar;  // empty: DefaultSyntheticGrammar()
  Lexicon lexicon;  // empty: DefaultSyntheticLexicon()
  uint64_t seed = 1;

  /// Base frequencies and offsets after defaults are applied.
  std::vector<double> BaseFrequencies() const;
  std::vector<double> PhonemeOffsets() const;
  /// Throws UsageError naming the offending field, DataError when grammar and
  /// lexicon disagree.
  void Validate() const;
};

/// Three-slot, three-words-per-slot grammar over six phonemes.
Grammar DefaultSyntheticGrammar();
Lexicon DefaultSyntheticLexicon();

struct SyntheticCorpus {
  SyntheticSpec spec;  // with defaults resolved
  Manifest manifest;   // paths follow the WriteSyntheticCorpus layout
  std::vector<Utterance> utterances;  // parallel to manifest.entries
};

/// Deterministic per spec.seed.  Samples are rounded to the 16-bit PCM grid
/// and pixels to 1/255 steps, so the in-memory corpus equals what
/// WriteSyntheticCorpus + LoadUtterance produce.
SyntheticCorpus SynthesizeCorpus(const SyntheticSpec &spec);

/// Writes manifest.jsonl, grammar.txt, lexicon.txt, wav/, align/ and roi/
/// under `dir`.
void WriteSyntheticCorpus(const SyntheticCorpus &corpus, const std::string &dir);

/// Renders the ROI image for one phoneme (used by the generator; exposed for
/// tests).
Eigen::VectorXd RenderMouth(int phoneme, int num_phonemes, int speaker);

}  // namespace avst

#endif  // AVST_CORPUS_SYNTHETIC_H_

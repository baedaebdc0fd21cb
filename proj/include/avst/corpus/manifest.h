// include/avst/corpus/manifest.h

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

#ifndef AVST_CORPUS_MANIFEST_H_
#define AVST_CORPUS_MANIFEST_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "avst/corpus/alignment.h"
#include "avst/corpus/wave-io.h"
#include "avst/dsp/visual.h"

namespace avst {

/// One manifest record.  Paths are relative to the manifest's directory
/// unless absolute.  `background` and `mix_seed` are set on mixture records.
struct ManifestEntry {
  std::string utt_id;
  int speaker_id = 0;
  std::string wav;
  std::vector<std::string> transcript;
  std::optional<std::string> roi;
  std::optional<std::string> align;
  std::optional<std::string> background;
  std::optional<uint64_t> mix_seed;
};

struct Manifest {
  int num_speakers = 0;
  std::vector<ManifestEntry> entries;
  std::string base_dir = ".";

  const ManifestEntry &Find(const std::string &utt_id) const;
  /// Throws DataError on duplicate ids or out-of-range speakers.
  void Validate() const;
};

// Manifest file: JSON lines.  The first line is a header
//   {"num_speakers": N}
// and every further line one record
//   {"utt_id": ..., "speaker_id": ..., "wav": ..., "transcript": "w1 w2 ...",
//    "roi": ..., "align": ..., "background": ..., "mix_seed": ...}
// with the last four optional.  Errors carry the 1-based line number.
Manifest LoadManifest(const std::string &path);
Manifest ParseManifest(const std::string &text, const std::string &source,
                       const std::string &base_dir);
std::string FormatManifest(const Manifest &manifest);
void SaveManifest(const std::string &path, const Manifest &manifest);

/// One speaker's recording with everything the pipeline consumes.
struct Utterance {
  std::string utt_id;
  int speaker_id = 0;
  Waveform wave;
  std::vector<std::string> transcript;
  std::optional<std::string> visual_path;
  std::optional<VisualTrack> visual;
  Alignment alignment;
};

/// Loads the waveform, alignment and (when `load_visual`) ROI track of a
/// record.
Utterance LoadUtterance(const Manifest &manifest, const ManifestEntry &entry,
                        bool load_visual);

}  // namespace avst

#endif  // AVST_CORPUS_MANIFEST_H_

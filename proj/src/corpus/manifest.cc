// src/corpus/manifest.cc

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

#include "avst/corpus/manifest.h"

#include <set>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/text-utils.h"
#include "json.hpp"

namespace avst {

using nlohmann::json;

const ManifestEntry &Manifest::Find(const std::string &utt_id) const {
  for (const auto &e : entries)
    if (e.utt_id == utt_id) return e;
  throw DataError("utterance '" + utt_id + "' not in manifest");
}

void Manifest::Validate() const {
  if (num_speakers < 1) throw DataError("manifest num_speakers must be >= 1");
  std::set<std::string> ids;
  for (const auto &e : entries) {
    if (!ids.insert(e.utt_id).second) throw DataError("duplicate utt_id '" + e.utt_id + "'");
    if (e.speaker_id < 0 || e.speaker_id >= num_speakers)
      throw DataError("utterance '" + e.utt_id + "' has speaker_id " +
                      std::to_string(e.speaker_id) + " outside [0, " +
                      std::to_string(num_speakers) + ")");
  }
}

Manifest ParseManifest(const std::string &text, const std::string &source,
                       const std::string &base_dir) {
  Manifest m;
  m.base_dir = base_dir;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  bool have_header = false;
  std::set<std::string> ids;
  while (std::getline(is, line)) {
    ++lineno;
    if (Trim(line).empty()) continue;
    const std::string where = source + ":" + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error &e) {
      throw DataError(where + ": parse error: " + e.what());
    }
    if (!j.is_object()) throw DataError(where + ": record is not a JSON object");
    try {
      if (!have_header) {
        if (!j.contains("num_speakers"))
          throw DataError(where + ": first line must be the {\"num_speakers\": N} header");
        m.num_speakers = j.at("num_speakers").get<int>();
        if (m.num_speakers < 1) throw DataError(where + ": num_speakers must be >= 1");
        have_header = true;
        continue;
      }
      ManifestEntry e;
      e.utt_id = j.at("utt_id").get<std::string>();
      e.speaker_id = j.at("speaker_id").get<int>();
      e.wav = j.at("wav").get<std::string>();
      e.transcript = SplitWhitespace(j.at("transcript").get<std::string>());
      if (j.contains("roi")) e.roi = j["roi"].get<std::string>();
      if (j.contains("align")) e.align = j["align"].get<std::string>();
      if (j.contains("background")) e.background = j["background"].get<std::string>();
      if (j.contains("mix_seed")) e.mix_seed = j["mix_seed"].get<uint64_t>();
      if (!ids.insert(e.utt_id).second)
        throw DataError(where + ": duplicate utt_id '" + e.utt_id + "'");
      if (e.speaker_id < 0 || e.speaker_id >= m.num_speakers)
        throw DataError(where + ": speaker_id " + std::to_string(e.speaker_id) +
                        " out of range [0, " + std::to_string(m.num_speakers) + ")");
      m.entries.push_back(std::move(e));
    } catch (const json::exception &e) {
      throw DataError(where + ": " + e.what());
    }
  }
  if (!have_header) throw DataError(source + ": empty manifest");
  return m;
}

Manifest LoadManifest(const std::string &path) {
  return ParseManifest(ReadFileBytes(path), path, DirName(path));
}

std::string FormatManifest(const Manifest &manifest) {
  std::string out = json{{"num_speakers", manifest.num_speakers}}.dump() + "\n";
  for (const auto &e : manifest.entries) {
    json j = json::object();
    j["utt_id"] = e.utt_id;
    j["speaker_id"] = e.speaker_id;
    j["wav"] = e.wav;
    j["transcript"] = JoinWords(e.transcript);
    if (e.roi) j["roi"] = *e.roi;
    if (e.align) j["align"] = *e.align;
    if (e.background) j["background"] = *e.background;
    if (e.mix_seed) j["mix_seed"] = *e.mix_seed;
    out += j.dump() + "\n";
  }
  return out;
}

void SaveManifest(const std::string &path, const Manifest &manifest) {
  WriteFileBytes(path, FormatManifest(manifest));
}

Utterance LoadUtterance(const Manifest &manifest, const ManifestEntry &entry,
                        bool load_visual) {
  Utterance u;
  u.utt_id = entry.utt_id;
  u.speaker_id = entry.speaker_id;
  u.transcript = entry.transcript;
  u.wave = ReadWav(ResolvePath(manifest.base_dir, entry.wav));
  if (u.wave.samples.empty()) throw DataError(entry.utt_id + ": empty waveform");
  if (entry.align) u.alignment = ReadAlignment(ResolvePath(manifest.base_dir, *entry.align));
  if (entry.roi) {
    u.visual_path = ResolvePath(manifest.base_dir, *entry.roi);
    if (load_visual) u.visual = ReadVisualTrack(*u.visual_path);
  }
  return u;
}

}  // namespace avst

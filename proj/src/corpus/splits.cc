// src/corpus/splits.cc

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

#include "avst/corpus/splits.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/random.h"
#include "json.hpp"

namespace avst {

SplitSet MakeSplits(const Manifest &manifest, const SplitRatios &ratios, uint64_t seed) {
  const double r[3] = {ratios.train, ratios.valid, ratios.test};
  for (double x : r)
    if (!(x >= 0.0 && x <= 1.0)) throw UsageError("split ratios must lie in [0, 1]");
  if (r[0] + r[1] + r[2] > 1.0 + 1e-12) throw UsageError("split ratios sum to more than 1");
  const int slots = (r[0] > 0) + (r[1] > 0) + (r[2] > 0);

  std::map<int, std::vector<std::string>> by_speaker;
  for (const auto &e : manifest.entries) by_speaker[e.speaker_id].push_back(e.utt_id);

  SplitSet out;
  std::vector<std::string> *lists[4] = {&out.train, &out.valid, &out.test, &out.background};
  for (auto &[speaker, ids] : by_speaker) {
    std::sort(ids.begin(), ids.end());
    const int n = static_cast<int>(ids.size());
    if (n < slots)
      throw DataError("speaker " + std::to_string(speaker) + " has " + std::to_string(n) +
                      " utterances, fewer than the " + std::to_string(slots) +
                      " split slots");
    int counts[3];
    for (int k = 0; k < 3; ++k) {
      counts[k] = static_cast<int>(std::floor(r[k] * n + 1e-9));
      if (r[k] > 0 && counts[k] == 0) counts[k] = 1;
    }
    if (counts[0] + counts[1] + counts[2] > n)
      throw DataError("speaker " + std::to_string(speaker) + " has too few utterances (" +
                      std::to_string(n) + ") to fill every split slot");
    Rng rng(DeriveSeed(seed, static_cast<uint64_t>(speaker)));
    const std::vector<int> perm = RandomPermutation(rng, n);
    int pos = 0;
    for (int k = 0; k < 3; ++k)
      for (int c = 0; c < counts[k]; ++c) lists[k]->push_back(ids[perm[pos++]]);
    while (pos < n) lists[3]->push_back(ids[perm[pos++]]);
  }
  for (auto *l : lists) std::sort(l->begin(), l->end());
  return out;
}

void ValidateSplits(const SplitSet &splits, const Manifest &manifest) {
  std::set<std::string> known;
  for (const auto &e : manifest.entries) known.insert(e.utt_id);
  std::set<std::string> seen;
  const std::pair<const char *, const std::vector<std::string> *> lists[] = {
      {"train", &splits.train},
      {"valid", &splits.valid},
      {"test", &splits.test},
      {"background", &splits.background}};
  for (const auto &[name, list] : lists)
    for (const auto &id : *list) {
      if (!known.count(id))
        throw DataError(std::string("split '") + name + "' names unknown utterance '" + id + "'");
      if (!seen.insert(id).second)
        throw DataError("utterance '" + id + "' appears in more than one split");
    }
}

std::string FormatSplits(const SplitSet &s) {
  nlohmann::ordered_json j;
  j["train"] = s.train;
  j["valid"] = s.valid;
  j["test"] = s.test;
  j["background"] = s.background;
  return j.dump(1) + "\n";
}

SplitSet ParseSplits(const std::string &text, const std::string &source) {
  try {
    const auto j = nlohmann::json::parse(text);
    SplitSet s;
    s.train = j.at("train").get<std::vector<std::string>>();
    s.valid = j.value("valid", std::vector<std::string>{});
    s.test = j.value("test", std::vector<std::string>{});
    s.background = j.value("background", std::vector<std::string>{});
    return s;
  } catch (const nlohmann::json::exception &e) {
    throw DataError(source + ": " + e.what());
  }
}

void SaveSplits(const std::string &path, const SplitSet &splits) {
  WriteFileBytes(path, FormatSplits(splits));
}

SplitSet LoadSplits(const std::string &path) {
  return ParseSplits(ReadFileBytes(path), path);
}

}  // namespace avst

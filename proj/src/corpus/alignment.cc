// src/corpus/alignment.cc

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

#include "avst/corpus/alignment.h"

#include <fstream>

#include "avst/base/error.h"
#include "avst/base/text-utils.h"

namespace avst {

void ValidateAlignment(const Alignment &align, int num_frames, const std::string &what) {
  if (align.empty()) throw DataError(what + ": empty alignment");
  int expected_start = 0;
  for (size_t i = 0; i < align.size(); ++i) {
    const AlignSegment &seg = align[i];
    if (seg.phoneme < 0)
      throw DataError(what + ": negative phoneme id in segment " + std::to_string(i));
    if (seg.start != expected_start)
      throw DataError(what + ": segment " + std::to_string(i) + " starts at frame " +
                      std::to_string(seg.start) + ", expected " +
                      std::to_string(expected_start) + " (gap or overlap)");
    if (seg.end <= seg.start)
      throw DataError(what + ": segment " + std::to_string(i) + " is empty");
    expected_start = seg.end;
  }
  if (expected_start != num_frames)
    throw DataError(what + ": alignment covers " + std::to_string(expected_start) +
                    " frames but there are " + std::to_string(num_frames));
}

int AlignmentLength(const Alignment &align) {
  return align.empty() ? 0 : align.back().end;
}

std::vector<int> AlignmentToLabels(const Alignment &align) {
  std::vector<int> labels;
  labels.reserve(AlignmentLength(align));
  for (const auto &seg : align)
    for (int t = seg.start; t < seg.end; ++t) labels.push_back(seg.phoneme);
  return labels;
}

std::vector<int> AlignmentPhonemes(const Alignment &align) {
  std::vector<int> out;
  out.reserve(align.size());
  for (const auto &seg : align) out.push_back(seg.phoneme);
  return out;
}

Alignment ReadAlignment(const std::string &path) {
  Alignment align;
  const auto lines = ReadLines(path);
  for (size_t i = 0; i < lines.size(); ++i) {
    const auto tok = SplitWhitespace(lines[i]);
    if (tok.empty()) continue;
    if (tok.size() != 3)
      throw DataError(path + ":" + std::to_string(i + 1) +
                      ": expected 'phoneme_id start_frame end_frame'");
    try {
      align.push_back({std::stoi(tok[0]), std::stoi(tok[1]), std::stoi(tok[2])});
    } catch (const std::exception &) {
      throw DataError(path + ":" + std::to_string(i + 1) + ": non-integer field");
    }
  }
  return align;
}

void WriteAlignment(const std::string &path, const Alignment &align) {
  std::string text;
  for (const auto &seg : align)
    text += std::to_string(seg.phoneme) + " " + std::to_string(seg.start) + " " +
            std::to_string(seg.end) + "\n";
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + path);
  os << text;
}

}  // namespace avst

// src/decoder/wer.cc

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

#include "avst/decoder/wer.h"

#include <vector>

#include "avst/base/error.h"

namespace avst {

double WerReport::Wer() const {
  return reference_words > 0 ? static_cast<double>(Errors()) / reference_words : 0.0;
}

WerReport &WerReport::operator+=(const WerReport &other) {
  substitutions += other.substitutions;
  deletions += other.deletions;
  insertions += other.insertions;
  reference_words += other.reference_words;
  return *this;
}

namespace {

// Cost ordered by (errors ascending, substitutions descending).
struct Cell {
  int errors = 0;
  int subs = 0;
  int dels = 0;
  int ins = 0;
};

inline bool Less(const Cell &a, const Cell &b) {
  return a.errors < b.errors || (a.errors == b.errors && a.subs > b.subs);
}

}  // namespace

WerReport ComputeWer(const std::vector<std::string> &reference,
                     const std::vector<std::string> &hypothesis) {
  if (reference.empty()) throw DataError("WER needs a nonempty reference");
  const size_t n = reference.size(), m = hypothesis.size();
  std::vector<Cell> prev(m + 1), cur(m + 1);
  for (size_t j = 1; j <= m; ++j) prev[j] = {static_cast<int>(j), 0, 0, static_cast<int>(j)};
  for (size_t i = 1; i <= n; ++i) {
    cur[0] = {static_cast<int>(i), 0, static_cast<int>(i), 0};
    for (size_t j = 1; j <= m; ++j) {
      Cell diag = prev[j - 1];
      if (reference[i - 1] != hypothesis[j - 1]) {
        ++diag.errors;
        ++diag.subs;
      }
      Cell del = prev[j];
      ++del.errors;
      ++del.dels;
      Cell ins = cur[j - 1];
      ++ins.errors;
      ++ins.ins;
      Cell best = diag;
      if (Less(del, best)) best = del;
      if (Less(ins, best)) best = ins;
      cur[j] = best;
    }
    std::swap(prev, cur);
  }
  const Cell &c = prev[m];
  WerReport r;
  r.substitutions = c.subs;
  r.deletions = c.dels;
  r.insertions = c.ins;
  r.reference_words = static_cast<int>(n);
  return r;
}

}  // namespace avst

// tests/support/oracles.h

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

// Independent reference implementations used by the unit tests and the
// acceptance binary: a direct-DFT filterbank, sentence enumeration with forced
// alignment, and the WER golden file reader.

#ifndef AVST_TESTS_SUPPORT_ORACLES_H_
#define AVST_TESTS_SUPPORT_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <numbers>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "avst/base/random.h"
#include "avst/decoder/decode-graph.h"
#include "avst/decoder/grammar.h"
#include "avst/decoder/viterbi.h"
#include "avst/dsp/feature-matrix.h"
#include "avst/dsp/log-mel.h"

namespace avst {
namespace testing {

inline std::vector<double> Sine(double hz, int n, int rate, double amp = 0.5) {
  std::vector<double> x(n);
  for (int i = 0; i < n; ++i) x[i] = amp * std::sin(2.0 * std::numbers::pi * hz * i / rate);
  return x;
}

// Direct O(N^2) DFT with explicitly written triangle weights: an independent
// reference for the FFT-based front end.
inline std::vector<double> OracleMelEnergies(const std::vector<double> &x, int start,
                                      const LogMelConfig &cfg) {
  const int win = static_cast<int>(std::lround(cfg.window_length * cfg.sample_rate));
  int nfft = 1;
  while (nfft < win) nfft *= 2;
  const double pi = std::numbers::pi;
  std::vector<double> power(nfft / 2 + 1);
  for (int k = 0; k <= nfft / 2; ++k) {
    std::complex<double> acc = 0.0;
    for (int n = 0; n < win; ++n) {
      const double w = 0.54 - 0.46 * std::cos(2 * pi * n / (win - 1));
      acc += x[start + n] * w * std::polar(1.0, -2 * pi * k * n / nfft);
    }
    power[k] = std::norm(acc);
  }
  auto mel = [](double f) { return 1127.0 * std::log(1.0 + f / 700.0); };
  const double top = mel(cfg.sample_rate / 2.0);
  std::vector<double> e(cfg.num_bins, 0.0);
  for (int b = 0; b < cfg.num_bins; ++b) {
    const double l = top * b / (cfg.num_bins + 1), c = top * (b + 1) / (cfg.num_bins + 1),
                 r = top * (b + 2) / (cfg.num_bins + 1);
    for (int k = 0; k <= nfft / 2; ++k) {
      const double m = mel(static_cast<double>(k) * cfg.sample_rate / nfft);
      double w = 0.0;
      if (m > l && m <= c) w = (m - l) / (c - l);
      if (m > c && m < r) w = (r - m) / (r - c);
      e[b] += w * power[k];
    }
  }
  return e;
}

inline int ArgMax(const std::vector<double> &v) {
  return static_cast<int>(std::max_element(v.begin(), v.end()) - v.begin());
}

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Best forced alignment of a fixed phoneme sequence against the emissions,
// including the transition scores a left-to-right chain would contribute.
inline double ForcedAlignmentScore(const FeatureMatrix &em, const std::vector<int> &phones,
                            const std::vector<bool> &word_start, const DecodeGraph &g,
                            const std::vector<int> &slot_of) {
  const int T = static_cast<int>(em.rows()), L = static_cast<int>(phones.size());
  if (T < L) return kNegInf;
  std::vector<double> prev(L, kNegInf), cur(L);
  prev[0] = g.word_entry_logprob[0] + em(0, phones[0]);
  for (int t = 1; t < T; ++t) {
    for (int q = 0; q < L; ++q) {
      double best = prev[q] + g.self_loop_logprob;
      if (q > 0) {
        double arc = g.advance_logprob;
        if (word_start[q]) arc += g.word_entry_logprob[slot_of[q]];
        best = std::max(best, prev[q - 1] + arc);
      }
      cur[q] = best + em(t, phones[q]);
    }
    std::swap(prev, cur);
  }
  return prev[L - 1];
}

struct Oracle {
  double score = kNegInf;
  std::vector<std::string> words;
  int num_best = 0;  // sentences reaching the best score
};

inline Oracle Enumerate(const FeatureMatrix &em, const DecodeGraph &g, const Lexicon &lex) {
  const Grammar &gr = g.grammar;
  std::vector<std::pair<double, std::vector<std::string>>> scored;
  for (uint64_t n = 0; n < gr.NumSentences(); ++n) {
    const std::vector<std::string> words = gr.Sentence(n);
    std::vector<int> phones, slot_of;
    std::vector<bool> start;
    for (int s = 0; s < gr.NumSlots(); ++s) {
      const auto &p = lex.Pronunciation(words[s]);
      for (size_t i = 0; i < p.size(); ++i) {
        phones.push_back(p[i]);
        start.push_back(i == 0);
        slot_of.push_back(s);
      }
    }
    scored.emplace_back(ForcedAlignmentScore(em, phones, start, g, slot_of), words);
  }
  Oracle best;
  for (const auto &[sc, words] : scored) best.score = std::max(best.score, sc);
  if (best.score == kNegInf) return best;
  // Ties: scores within a relative 1e-10 of the best.
  const double tol = 1e-10 * std::max(1.0, std::abs(best.score));
  for (const auto &[sc, words] : scored) {
    if (sc < best.score - tol) continue;
    ++best.num_best;
    if (best.words.empty() || words < best.words) best.words = words;
  }
  return best;
}

struct Instance {
  Grammar grammar;
  Lexicon lexicon;
  int num_phonemes = 0;
};

inline Instance RandomInstance(Rng &rng, int num_slots, int max_words, int max_len) {
  Instance in;
  in.num_phonemes = 2 + static_cast<int>(UniformIndex(rng, 4));
  std::vector<GrammarSlot> slots;
  int next = 0;
  for (int s = 0; s < num_slots; ++s) {
    GrammarSlot slot{"slot" + std::to_string(s), {}};
    const int words = 1 + static_cast<int>(UniformIndex(rng, max_words));
    for (int w = 0; w < words; ++w) {
      // Names not in index order, so the tie rule is exercised on strings.
      const std::string name = std::string(1, static_cast<char>('a' + UniformIndex(rng, 26))) +
                               std::to_string(next++);
      std::vector<int> pron(1 + UniformIndex(rng, max_len));
      for (int &p : pron) p = static_cast<int>(UniformIndex(rng, in.num_phonemes));
      in.lexicon.Add(name, pron);
      slot.words.push_back(name);
    }
    slots.push_back(slot);
  }
  in.grammar = Grammar(slots);
  return in;
}

inline FeatureMatrix RandomPosteriors(Rng &rng, int frames, int labels) {
  FeatureMatrix p(frames, labels);
  for (int t = 0; t < frames; ++t) {
    for (int k = 0; k < labels; ++k) p(t, k) = -std::log(UniformUnit(rng) + 1e-12);
    p.row(t) /= p.row(t).sum();
  }
  return p;
}

// Viterbi against enumeration on random instances.  Odd trials use integer
// scores, where ties between sentences are frequent and exact.
struct DecoderTrials {
  int instances = 0;
  int word_mismatches = 0;
  int ties = 0;
  double max_score_diff = 0.0;
};

inline DecoderTrials RunDecoderTrials(uint64_t seed, int trials) {
  Rng rng(seed);
  DecoderTrials out;
  for (int trial = 0; trial < trials; ++trial) {
    const int slots = 1 + static_cast<int>(UniformIndex(rng, 4));
    const Instance in = RandomInstance(rng, slots, 4, 3);
    DecodeGraph g = BuildGraph(in.grammar, in.lexicon, 0.2 + 0.6 * UniformUnit(rng));
    const int frames = g.MinFrames() + static_cast<int>(UniformIndex(rng, 20));
    FeatureMatrix em;
    if (trial % 2 == 0) {
      em = EmissionScores(RandomPosteriors(rng, frames, in.num_phonemes), std::nullopt);
    } else {
      g.self_loop_logprob = -1.0;
      g.advance_logprob = -1.0;
      for (double &e : g.word_entry_logprob) e = -2.0;
      em.resize(frames, in.num_phonemes);
      for (Eigen::Index i = 0; i < em.size(); ++i) em(i) = -static_cast<double>(UniformIndex(rng, 2));
    }
    const Oracle want = Enumerate(em, g, in.lexicon);
    const DecodeResult got = ViterbiDecodeScores(em, g);
    ++out.instances;
    out.ties += want.num_best > 1;
    out.word_mismatches += got.words != want.words;
    out.max_score_diff = std::max(out.max_score_diff, std::abs(got.score - want.score));
  }
  return out;
}

struct WerGoldenRow {
  std::vector<std::string> reference, hypothesis;
  int substitutions = 0, deletions = 0, insertions = 0, reference_words = 0;
};

inline std::vector<WerGoldenRow> ReadWerGolden(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<WerGoldenRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (!line.empty() && line.back() == '\t') f.push_back("");
    if (f.size() != 6) throw std::runtime_error(path + ": malformed row: " + line);
    auto words = [](const std::string &s) {
      std::vector<std::string> w;
      std::istringstream is(s);
      for (std::string t; is >> t;) w.push_back(t);
      return w;
    };
    rows.push_back({words(f[0]), words(f[1]), std::stoi(f[2]), std::stoi(f[3]), std::stoi(f[4]),
                    std::stoi(f[5])});
  }
  return rows;
}

}  // namespace testing
}  // namespace avst

#endif  // AVST_TESTS_SUPPORT_ORACLES_H_

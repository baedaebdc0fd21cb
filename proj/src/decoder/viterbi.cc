// src/decoder/viterbi.cc

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

#include "avst/decoder/viterbi.h"

#include <algorithm>
#include <cmath>
#include <limits>

#include "avst/base/error.h"

namespace avst {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// A partial hypothesis: its score, and a code for the word prefix it has
// committed to.  Codes at a given slot depth are mixed-radix numbers over the
// sorted ranks of the words, so comparing codes compares prefixes
// lexicographically.
struct Token {
  double score = kNegInf;
  uint64_t prefix = 0;
  int back = -1;
};

// Scores closer than this (relative) count as tied.  Sentences whose best
// paths label the frames identically have equal scores in exact arithmetic,
// and summation order alone must not pick among them.
constexpr double kTieTolerance = 1e-10;

inline bool Better(double score, uint64_t prefix, double cur_score, uint64_t cur_prefix) {
  if (cur_score == kNegInf) return score > kNegInf || prefix < cur_prefix;
  const double tol = kTieTolerance * std::max({1.0, std::abs(score), std::abs(cur_score)});
  if (score > cur_score + tol) return true;
  if (score < cur_score - tol) return false;
  return prefix < cur_prefix;
}

inline bool Better(double score, uint64_t prefix, const Token &cur) {
  return Better(score, prefix, cur.score, cur.prefix);
}

}  // namespace

FeatureMatrix EmissionScores(const FeatureMatrix &posteriors,
                             const std::optional<Eigen::VectorXd> &priors) {
  if (priors && priors->size() != posteriors.cols())
    throw DataError("prior vector has " + std::to_string(priors->size()) +
                    " entries but posteriors have " + std::to_string(posteriors.cols()) +
                    " columns");
  FeatureMatrix out(posteriors.rows(), posteriors.cols());
  for (Eigen::Index t = 0; t < posteriors.rows(); ++t)
    for (Eigen::Index k = 0; k < posteriors.cols(); ++k) {
      double v = std::log(std::max(posteriors(t, k), 1e-30));
      if (priors) v -= std::log(std::max((*priors)(k), 1e-30));
      out(t, k) = v;
    }
  return out;
}

DecodeResult ViterbiDecodeScores(const FeatureMatrix &log_emissions,
                                 const DecodeGraph &graph) {
  const int num_frames = static_cast<int>(log_emissions.rows());
  const int num_states = graph.NumStates();
  if (num_frames < graph.MinFrames())
    throw DataError("utterance has " + std::to_string(num_frames) +
                    " frames but the shortest sentence needs " +
                    std::to_string(graph.MinFrames()));
  if (graph.grammar.NumSentences() == UINT64_MAX)
    throw UsageError("grammar too large for exact decoding");
  for (const auto &st : graph.states)
    if (st.phoneme >= log_emissions.cols())
      throw DataError("graph uses phoneme " + std::to_string(st.phoneme) +
                      " but emissions have " + std::to_string(log_emissions.cols()) +
                      " columns");

  const int num_slots = graph.grammar.NumSlots();
  std::vector<Token> lattice(static_cast<size_t>(num_frames) * num_states);
  auto at = [&](int t, int s) -> Token & {
    return lattice[static_cast<size_t>(t) * num_states + s];
  };

  for (const auto &chain : graph.chains[0]) {
    Token &tok = at(0, chain.first_state);
    tok.score = graph.word_entry_logprob[0] +
                log_emissions(0, graph.states[chain.first_state].phoneme);
    tok.prefix = static_cast<uint64_t>(chain.sorted_rank);
    tok.back = -2;  // start marker
  }

  for (int t = 1; t < num_frames; ++t) {
    for (int slot = 0; slot < num_slots; ++slot) {
      const uint64_t radix = graph.chains[slot].size();
      const double entry = graph.advance_logprob + graph.word_entry_logprob[slot];
      for (const auto &chain : graph.chains[slot]) {
        for (int p = 0; p < chain.length; ++p) {
          const int s = chain.first_state + p;
          Token best;
          const Token &stay = at(t - 1, s);
          if (stay.score > kNegInf) {
            best.score = stay.score + graph.self_loop_logprob;
            best.prefix = stay.prefix;
            best.back = s;
          }
          if (p > 0) {
            const Token &prev = at(t - 1, s - 1);
            if (prev.score > kNegInf) {
              const double sc = prev.score + graph.advance_logprob;
              if (best.back == -1 || Better(sc, prev.prefix, best)) {
                best.score = sc;
                best.prefix = prev.prefix;
                best.back = s - 1;
              }
            }
          } else if (slot > 0) {
            for (const auto &pc : graph.chains[slot - 1]) {
              const int e = pc.first_state + pc.length - 1;
              const Token &prev = at(t - 1, e);
              if (prev.score == kNegInf) continue;
              const double sc = prev.score + entry;
              const uint64_t prefix = prev.prefix * radix + chain.sorted_rank;
              if (best.back == -1 || Better(sc, prefix, best)) {
                best.score = sc;
                best.prefix = prefix;
                best.back = e;
              }
            }
          }
          if (best.back != -1) best.score += log_emissions(t, graph.states[s].phoneme);
          at(t, s) = best;
        }
      }
    }
  }

  int final_state = -1;
  for (const auto &chain : graph.chains[num_slots - 1]) {
    const int e = chain.first_state + chain.length - 1;
    const Token &tok = at(num_frames - 1, e);
    if (tok.score == kNegInf) continue;
    if (final_state < 0) {
      final_state = e;
      continue;
    }
    const Token &cur = at(num_frames - 1, final_state);
    if (Better(tok.score, tok.prefix, cur)) final_state = e;
  }
  if (final_state < 0) throw DataError("no complete path through the decoding graph");

  DecodeResult result;
  result.score = at(num_frames - 1, final_state).score;
  result.state_path.assign(num_frames, 0);
  int s = final_state;
  for (int t = num_frames - 1; t >= 0; --t) {
    result.state_path[t] = s;
    s = at(t, s).back;
  }
  result.words.resize(num_slots);
  for (int t = 0; t < num_frames; ++t) {
    const GraphState &st = graph.states[result.state_path[t]];
    result.words[st.slot] = graph.grammar.slots()[st.slot].words[st.word];
  }
  return result;
}

DecodeResult ViterbiDecode(const FeatureMatrix &posteriors, const DecodeGraph &graph,
                           const std::optional<Eigen::VectorXd> &priors) {
  return ViterbiDecodeScores(EmissionScores(posteriors, priors), graph);
}

double FrameAccuracy(const FeatureMatrix &posteriors, const Alignment &alignment) {
  const int num_frames = static_cast<int>(posteriors.rows());
  ValidateAlignment(alignment, num_frames, "frame_accuracy");
  if (num_frames == 0) return 0.0;
  int correct = 0;
  for (const auto &seg : alignment)
    for (int t = seg.start; t < seg.end; ++t) {
      Eigen::Index arg;
      posteriors.row(t).maxCoeff(&arg);
      correct += (static_cast<int>(arg) == seg.phoneme);
    }
  return static_cast<double>(correct) / num_frames;
}

}  // namespace avst

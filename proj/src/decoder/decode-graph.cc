// src/decoder/decode-graph.cc

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

#include "avst/decoder/decode-graph.h"

#include <algorithm>
#include <climits>
#include <cmath>
#include <numeric>

#include "avst/base/error.h"

namespace avst {

int DecodeGraph::NumAdvances() const {
  int n = 0;
  for (const auto &slot : chains)
    for (const auto &c : slot) n += c.length - 1;
  return n;
}

int DecodeGraph::NumWordBoundaryArcs() const {
  int n = 0;
  for (size_t i = 0; i + 1 < chains.size(); ++i)
    n += static_cast<int>(chains[i].size() * chains[i + 1].size());
  return n;
}

int DecodeGraph::MinFrames() const {
  int n = 0;
  for (const auto &slot : chains) {
    int shortest = INT_MAX;
    for (const auto &c : slot) shortest = std::min(shortest, c.length);
    n += shortest;
  }
  return n;
}

DecodeGraph BuildGraph(const Grammar &grammar, const Lexicon &lexicon,
                       double self_loop_prob) {
  if (!(self_loop_prob > 0.0 && self_loop_prob < 1.0))
    throw UsageError("self_loop_prob must lie in (0, 1)");
  if (grammar.NumSlots() == 0) throw DataError("cannot build a graph from an empty grammar");
  DecodeGraph g;
  g.grammar = grammar;
  g.self_loop_logprob = std::log(self_loop_prob);
  g.advance_logprob = std::log1p(-self_loop_prob);
  g.chains.resize(grammar.NumSlots());
  for (int s = 0; s < grammar.NumSlots(); ++s) {
    const auto &words = grammar.slots()[s].words;
    std::vector<int> order(words.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return words[a] < words[b]; });
    g.chains[s].resize(words.size());
    for (size_t r = 0; r < order.size(); ++r) g.chains[s][order[r]].sorted_rank = static_cast<int>(r);
    g.word_entry_logprob.push_back(-std::log(static_cast<double>(words.size())));
    for (size_t w = 0; w < words.size(); ++w) {
      const auto &pron = lexicon.Pronunciation(words[w]);
      WordChain &chain = g.chains[s][w];
      chain.word = words[w];
      chain.first_state = g.NumStates();
      chain.length = static_cast<int>(pron.size());
      for (size_t p = 0; p < pron.size(); ++p)
        g.states.push_back({pron[p], s, static_cast<int>(w), static_cast<int>(p)});
    }
  }
  return g;
}

}  // namespace avst

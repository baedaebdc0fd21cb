// include/avst/decoder/decode-graph.h

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

#ifndef AVST_DECODER_DECODE_GRAPH_H_
#define AVST_DECODER_DECODE_GRAPH_H_

#include <string>
#include <vector>

#include "avst/decoder/grammar.h"

namespace avst {

/// One HMM state per phoneme occurrence of each slot word.
struct GraphState {
  int phoneme = 0;
  int slot = 0;
  int word = 0;      // index into grammar.slots()[slot].words
  int position = 0;  // phoneme position inside the word
};

/// Left-to-right phoneme chain of one slot word.
struct WordChain {
  std::string word;
  int first_state = 0;
  int length = 0;
  /// Position of the word when the slot's words are sorted as strings.
  int sorted_rank = 0;
};

/// Slot-by-slot word chains; the last state of every word in slot i connects
/// to the first state of every word in slot i+1.  Each state has a self-loop
/// (self_loop_prob) and an advance arc (1 - self_loop_prob); entering a word
/// of slot i also pays log(1 / |slot i|).
struct DecodeGraph {
  Grammar grammar;
  std::vector<GraphState> states;
  std::vector<std::vector<WordChain>> chains;  // [slot][word]
  double self_loop_logprob = 0.0;
  double advance_logprob = 0.0;
  std::vector<double> word_entry_logprob;  // per slot

  int NumStates() const { return static_cast<int>(states.size()); }
  int NumSelfLoops() const { return NumStates(); }
  /// Advance arcs inside words.
  int NumAdvances() const;
  /// Arcs from word ends in slot i to word starts in slot i+1.
  int NumWordBoundaryArcs() const;
  /// Frames needed by the shortest complete path.
  int MinFrames() const;
};

/// Throws DataError naming any grammar word missing from the lexicon, and
/// UsageError unless 0 < self_loop_prob < 1.
DecodeGraph BuildGraph(const Grammar &grammar, const Lexicon &lexicon,
                       double self_loop_prob = 0.5);

}  // namespace avst

#endif  // AVST_DECODER_DECODE_GRAPH_H_

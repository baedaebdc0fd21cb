// include/avst/decoder/grammar.h

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

#ifndef AVST_DECODER_GRAMMAR_H_
#define AVST_DECODER_GRAMMAR_H_

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace avst {

struct GrammarSlot {
  std::string name;
  std::vector<std::string> words;
};

/// Fixed-order slot grammar, e.g. "$command $color $preposition $letter
/// $digit $adverb".  Every sentence takes exactly one word per slot.
class Grammar {
 public:
  Grammar() = default;
  /// Throws DataError on an empty slot or a word repeated within a slot.
  explicit Grammar(std::vector<GrammarSlot> slots);

  const std::vector<GrammarSlot> &slots() const { return slots_; }
  int NumSlots() const { return static_cast<int>(slots_.size()); }
  /// Product of slot sizes (saturates at UINT64_MAX).
  uint64_t NumSentences() const;
  /// Sentence with the given mixed-radix index, slot 0 most significant.
  std::vector<std::string> Sentence(uint64_t index) const;
  /// True when the sequence takes one in-inventory word per slot, in order.
  bool IsLegal(const std::vector<std::string> &words) const;

 private:
  std::vector<GrammarSlot> slots_;
};

/// word -> phoneme id sequence.
class Lexicon {
 public:
  Lexicon() = default;
  void Add(const std::string &word, std::vector<int> phonemes);
  bool Contains(const std::string &word) const;
  /// Throws DataError naming the word if absent.
  const std::vector<int> &Pronunciation(const std::string &word) const;
  const std::map<std::string, std::vector<int>> &entries() const { return entries_; }
  /// Every grammar word present and every phoneme id < num_phonemes
  /// (num_phonemes <= 0 skips the range check).
  void ValidateAgainst(const Grammar &grammar, int num_phonemes) const;

 private:
  std::map<std::string, std::vector<int>> entries_;
};

/// Phoneme string of a word sequence.
std::vector<int> ExpandToPhonemes(const Lexicon &lexicon,
                                  const std::vector<std::string> &words);

// Grammar file: one slot per line, "slot_name: w1 w2 w3 ...".
// Lexicon file: "word ph1 ph2 ..." per line.  '#' starts a comment line.
// `expected_slots` > 0 additionally requires that many slots (6 for GRID).
Grammar LoadGrammar(const std::string &path, int expected_slots = 0);
Grammar ParseGrammar(const std::string &text, const std::string &source,
                     int expected_slots = 0);
std::string FormatGrammar(const Grammar &grammar);
Lexicon LoadLexicon(const std::string &path);
Lexicon ParseLexicon(const std::string &text, const std::string &source);
std::string FormatLexicon(const Lexicon &lexicon);

}  // namespace avst

#endif  // AVST_DECODER_GRAMMAR_H_

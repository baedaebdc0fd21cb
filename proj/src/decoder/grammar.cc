// src/decoder/grammar.cc

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

#include "avst/decoder/grammar.h"

#include <set>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/text-utils.h"

namespace avst {

Grammar::Grammar(std::vector<GrammarSlot> slots) : slots_(std::move(slots)) {
  for (size_t i = 0; i < slots_.size(); ++i) {
    const auto &slot = slots_[i];
    const std::string label = slot.name.empty() ? "#" + std::to_string(i) : slot.name;
    if (slot.words.empty()) throw DataError("grammar slot '" + label + "' is empty");
    std::set<std::string> seen;
    for (const auto &w : slot.words)
      if (!seen.insert(w).second)
        throw DataError("grammar slot '" + label + "' repeats word '" + w + "'");
  }
}

uint64_t Grammar::NumSentences() const {
  if (slots_.empty()) return 0;
  uint64_t n = 1;
  for (const auto &slot : slots_) {
    const uint64_t k = slot.words.size();
    if (n > UINT64_MAX / k) return UINT64_MAX;
    n *= k;
  }
  return n;
}

std::vector<std::string> Grammar::Sentence(uint64_t index) const {
  std::vector<std::string> words(slots_.size());
  for (size_t i = slots_.size(); i-- > 0;) {
    const uint64_t k = slots_[i].words.size();
    words[i] = slots_[i].words[index % k];
    index /= k;
  }
  return words;
}

bool Grammar::IsLegal(const std::vector<std::string> &words) const {
  if (words.size() != slots_.size()) return false;
  for (size_t i = 0; i < words.size(); ++i) {
    bool found = false;
    for (const auto &w : slots_[i].words) found = found || (w == words[i]);
    if (!found) return false;
  }
  return true;
}

void Lexicon::Add(const std::string &word, std::vector<int> phonemes) {
  if (phonemes.empty())
    throw DataError("lexicon entry '" + word + "' has no phonemes");
  if (!entries_.emplace(word, std::move(phonemes)).second)
    throw DataError("lexicon has duplicate entry '" + word + "'");
}

bool Lexicon::Contains(const std::string &word) const {
  return entries_.count(word) > 0;
}

const std::vector<int> &Lexicon::Pronunciation(const std::string &word) const {
  auto it = entries_.find(word);
  if (it == entries_.end()) throw DataError("word '" + word + "' missing from lexicon");
  return it->second;
}

void Lexicon::ValidateAgainst(const Grammar &grammar, int num_phonemes) const {
  for (const auto &slot : grammar.slots())
    for (const auto &w : slot.words) {
      const auto &pron = Pronunciation(w);
      for (int ph : pron)
        if (ph < 0 || (num_phonemes > 0 && ph >= num_phonemes))
          throw DataError("lexicon entry '" + w + "' uses phoneme " +
                          std::to_string(ph) + " outside the inventory of " +
                          std::to_string(num_phonemes));
    }
}

std::vector<int> ExpandToPhonemes(const Lexicon &lexicon,
                                  const std::vector<std::string> &words) {
  std::vector<int> out;
  for (const auto &w : words) {
    const auto &pron = lexicon.Pronunciation(w);
    out.insert(out.end(), pron.begin(), pron.end());
  }
  return out;
}

Grammar ParseGrammar(const std::string &text, const std::string &source,
                     int expected_slots) {
  std::vector<GrammarSlot> slots;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const std::string t = Trim(line);
    if (t.empty() || t[0] == '#') continue;
    const size_t colon = t.find(':');
    if (colon == std::string::npos)
      throw DataError(source + ":" + std::to_string(lineno) +
                      ": expected 'slot_name: w1 w2 ...'");
    GrammarSlot slot;
    slot.name = Trim(t.substr(0, colon));
    if (slot.name.empty())
      throw DataError(source + ":" + std::to_string(lineno) + ": missing slot name");
    slot.words = SplitWhitespace(t.substr(colon + 1));
    if (slot.words.empty())
      throw DataError(source + ":" + std::to_string(lineno) + ": grammar slot '" +
                      slot.name + "' is empty");
    slots.push_back(std::move(slot));
  }
  if (slots.empty()) throw DataError(source + ": grammar has no slots");
  if (expected_slots > 0 && static_cast<int>(slots.size()) != expected_slots)
    throw DataError(source + ": grammar has " + std::to_string(slots.size()) +
                    " slots, expected " + std::to_string(expected_slots));
  try {
    return Grammar(std::move(slots));
  } catch (const DataError &e) {
    throw DataError(source + ": " + e.what());
  }
}

Grammar LoadGrammar(const std::string &path, int expected_slots) {
  return ParseGrammar(ReadFileBytes(path), path, expected_slots);
}

std::string FormatGrammar(const Grammar &grammar) {
  std::string out;
  for (const auto &slot : grammar.slots())
    out += slot.name + ": " + JoinWords(slot.words) + "\n";
  return out;
}

Lexicon ParseLexicon(const std::string &text, const std::string &source) {
  Lexicon lex;
  std::istringstream is(text);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto tok = SplitWhitespace(line);
    if (tok.empty() || tok[0][0] == '#') continue;
    const std::string where = source + ":" + std::to_string(lineno);
    if (tok.size() < 2) throw DataError(where + ": word '" + tok[0] + "' has no phonemes");
    std::vector<int> phones;
    for (size_t i = 1; i < tok.size(); ++i) {
      try {
        size_t used = 0;
        phones.push_back(std::stoi(tok[i], &used));
        if (used != tok[i].size()) throw std::invalid_argument("trailing");
      } catch (const std::exception &) {
        throw DataError(where + ": phoneme '" + tok[i] + "' is not an integer id");
      }
    }
    try {
      lex.Add(tok[0], std::move(phones));
    } catch (const DataError &e) {
      throw DataError(where + ": " + e.what());
    }
  }
  return lex;
}

Lexicon LoadLexicon(const std::string &path) {
  return ParseLexicon(ReadFileBytes(path), path);
}

std::string FormatLexicon(const Lexicon &lexicon) {
  std::string out;
  for (const auto &[word, pron] : lexicon.entries()) {
    out += word;
    for (int ph : pron) out += " " + std::to_string(ph);
    out += "\n";
  }
  return out;
}

}  // namespace avst

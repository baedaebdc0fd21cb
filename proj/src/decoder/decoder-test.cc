// src/decoder/decoder-test.cc

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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/base/text-utils.h"
#include "avst/decoder/decode-graph.h"
#include "avst/decoder/grammar.h"
#include "avst/decoder/viterbi.h"
#include "avst/decoder/wer.h"
#include "doctest.h"
#include "oracles.h"

namespace avst {
namespace {

using namespace testing;  // NOLINT

double PathScore(const FeatureMatrix &em, const DecodeGraph &g, const std::vector<int> &path) {
  double sc = g.word_entry_logprob[0] + em(0, g.states[path[0]].phoneme);
  for (size_t t = 1; t < path.size(); ++t) {
    const GraphState &a = g.states[path[t - 1]], &b = g.states[path[t]];
    if (path[t] == path[t - 1])
      sc += g.self_loop_logprob;
    else if (b.slot == a.slot)
      sc += g.advance_logprob;
    else
      sc += g.advance_logprob + g.word_entry_logprob[b.slot];
    sc += em(t, b.phoneme);
  }
  return sc;
}

// Legal path: starts at a first-slot word start, ends at a last-slot word end,
// and every move is a self-loop, an in-word advance or a word boundary.
bool LegalPath(const DecodeGraph &g, const std::vector<int> &path) {
  const GraphState &first = g.states[path.front()], &last = g.states[path.back()];
  if (first.slot != 0 || first.position != 0) return false;
  const WordChain &lc = g.chains[last.slot][last.word];
  if (last.slot != g.grammar.NumSlots() - 1 || last.position != lc.length - 1) return false;
  for (size_t t = 1; t < path.size(); ++t) {
    const GraphState &a = g.states[path[t - 1]], &b = g.states[path[t]];
    if (path[t] == path[t - 1]) continue;
    if (b.slot == a.slot && b.word == a.word && b.position == a.position + 1) continue;
    if (b.slot == a.slot + 1 && b.position == 0 &&
        a.position == g.chains[a.slot][a.word].length - 1)
      continue;
    return false;
  }
  return true;
}

}  // namespace

TEST_CASE("grammar and lexicon files") {
  const Grammar g = ParseGrammar(
      "command: bin lay place set\ncolor: blue green red white\n# comment\n\n"
      "preposition: at by in with\nletter: a b c d\ndigit: zero one two\n"
      "adverb: again now please soon\n",
      "grid.txt", 6);
  CHECK(g.NumSlots() == 6);
  CHECK(g.NumSentences() == 4ULL * 4 * 4 * 4 * 3 * 4);
  CHECK(g.Sentence(0) == std::vector<std::string>{"bin", "blue", "at", "a", "zero", "again"});
  CHECK(g.Sentence(g.NumSentences() - 1) ==
        std::vector<std::string>{"set", "white", "with", "d", "two", "soon"});
  CHECK(g.IsLegal({"lay", "red", "by", "c", "one", "now"}));
  CHECK(!g.IsLegal({"lay", "red", "by", "c", "one"}));
  CHECK(!g.IsLegal({"red", "lay", "by", "c", "one", "now"}));
  CHECK(FormatGrammar(ParseGrammar(FormatGrammar(g), "again", 6)) == FormatGrammar(g));
  CHECK_THROWS_AS(ParseGrammar("a: x\nb: y\n", "two", 6), DataError);
  try {
    ParseGrammar("command: bin\ncolor:\n", "empty.txt");
    FAIL("expected an error");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("color") != std::string::npos);
  }
  try {
    ParseGrammar("command: bin set bin\n", "dup.txt");
    FAIL("expected an error");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("'bin'") != std::string::npos);
  }

  const Lexicon lex = ParseLexicon("bin 0 1\nset 2 0 3\n", "lex.txt");
  CHECK(lex.Pronunciation("set") == std::vector<int>{2, 0, 3});
  CHECK(FormatLexicon(ParseLexicon(FormatLexicon(lex), "x")) == FormatLexicon(lex));
  CHECK_THROWS_AS(ParseLexicon("bin\n", "lex.txt"), DataError);
  CHECK_THROWS_AS(ParseLexicon("bin 0 x\n", "lex.txt"), DataError);
  CHECK_THROWS_AS(ParseLexicon("bin 0\nbin 1\n", "lex.txt"), DataError);
  const Grammar small(std::vector<GrammarSlot>{{"command", {"bin", "set"}}});
  lex.ValidateAgainst(small, 4);
  CHECK_THROWS_AS(lex.ValidateAgainst(small, 3), DataError);
  const Grammar missing(std::vector<GrammarSlot>{{"command", {"bin", "lay"}}});
  try {
    lex.ValidateAgainst(missing, 4);
    FAIL("expected an error");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("lay") != std::string::npos);
  }
}

TEST_CASE("graph construction counts") {
  Lexicon lex;
  lex.Add("bin", {0, 1, 2});
  const DecodeGraph one = BuildGraph(Grammar(std::vector<GrammarSlot>{{"w", {"bin"}}}), lex);
  CHECK(one.NumStates() == 3);
  CHECK(one.NumSelfLoops() == 3);
  CHECK(one.NumAdvances() == 2);
  CHECK(one.NumWordBoundaryArcs() == 0);

  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Instance in = RandomInstance(rng, 3, 4, 4);
    const DecodeGraph g = BuildGraph(in.grammar, in.lexicon, 0.3);
    int states = 0, boundary = 0;
    for (int s = 0; s < in.grammar.NumSlots(); ++s) {
      for (const auto &w : in.grammar.slots()[s].words)
        states += static_cast<int>(in.lexicon.Pronunciation(w).size());
      if (s + 1 < in.grammar.NumSlots())
        boundary += static_cast<int>(in.grammar.slots()[s].words.size() *
                                     in.grammar.slots()[s + 1].words.size());
    }
    CHECK(g.NumStates() == states);
    CHECK(g.NumWordBoundaryArcs() == boundary);
    CHECK(g.self_loop_logprob == doctest::Approx(std::log(0.3)));
    CHECK(g.advance_logprob == doctest::Approx(std::log(0.7)));
  }
  const Grammar absent(std::vector<GrammarSlot>{{"w", {"lay"}}});
  CHECK_THROWS_AS(BuildGraph(absent, lex), DataError);
  CHECK_THROWS_AS(BuildGraph(Grammar(std::vector<GrammarSlot>{{"w", {"bin"}}}), lex, 1.0),
                  UsageError);
}

TEST_CASE("viterbi equals sentence enumeration") {
  Rng rng(17);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const int slots = 1 + static_cast<int>(UniformIndex(rng, 4));
    const Instance in = RandomInstance(rng, slots, 4, 3);
    const DecodeGraph g = BuildGraph(in.grammar, in.lexicon, 0.2 + 0.6 * UniformUnit(rng));
    const int frames = g.MinFrames() + static_cast<int>(UniformIndex(rng, 25));
    const FeatureMatrix post = RandomPosteriors(rng, frames, in.num_phonemes);
    std::optional<Eigen::VectorXd> priors;
    if (trial % 2) {
      priors = Eigen::VectorXd(post.cols());
      for (Eigen::Index k = 0; k < post.cols(); ++k) (*priors)(k) = 0.1 + UniformUnit(rng);
      *priors /= priors->sum();
    }
    const FeatureMatrix em = EmissionScores(post, priors);
    const Oracle want = Enumerate(em, g, in.lexicon);
    if (want.score == kNegInf) continue;
    const DecodeResult got = ViterbiDecode(post, g, priors);
    REQUIRE(got.score == doctest::Approx(want.score).epsilon(1e-12));
    REQUIRE(std::abs(got.score - want.score) <= 1e-9);
    INFO(JoinWords(got.words), " vs ", JoinWords(want.words), " ", got.score - want.score, " ",
         want.num_best, "\n", FormatGrammar(in.grammar), FormatLexicon(in.lexicon));
    REQUIRE(got.words == want.words);
    REQUIRE(got.state_path.size() == static_cast<size_t>(frames));
    REQUIRE(LegalPath(g, got.state_path));
    REQUIRE(std::abs(PathScore(em, g, got.state_path) - got.score) <= 1e-9);
    REQUIRE(in.grammar.IsLegal(got.words));
    ++checked;
  }
  CHECK(checked >= 300);
}

TEST_CASE("viterbi on a six-slot grammar near the enumeration limit") {
  Rng rng(5);
  for (int trial = 0; trial < 3; ++trial) {
    Instance in;
    in.num_phonemes = 8;
    std::vector<GrammarSlot> slots;
    for (int s = 0; s < 6; ++s) {
      GrammarSlot slot{"s" + std::to_string(s), {}};
      for (int w = 0; w < 4; ++w) {
        const std::string name = "w" + std::to_string(s) + std::to_string(w);
        std::vector<int> pron(1 + UniformIndex(rng, 3));
        for (int &p : pron) p = static_cast<int>(UniformIndex(rng, 8));
        in.lexicon.Add(name, pron);
        slot.words.push_back(name);
      }
      slots.push_back(slot);
    }
    in.grammar = Grammar(slots);
    REQUIRE(in.grammar.NumSentences() == 4096);
    const DecodeGraph g = BuildGraph(in.grammar, in.lexicon);
    const FeatureMatrix post = RandomPosteriors(rng, 40, 8);
    const Oracle want = Enumerate(EmissionScores(post, std::nullopt), g, in.lexicon);
    const DecodeResult got = ViterbiDecode(post, g);
    CHECK(std::abs(got.score - want.score) <= 1e-9);
    CHECK(got.words == want.words);
  }
}

TEST_CASE("viterbi ties go to the lexicographically smaller sentence") {
  // Integer scores keep every sum exact, so ties are genuine.
  Rng rng(23);
  int ties = 0;
  for (int trial = 0; trial < 200; ++trial) {
    const Instance in = RandomInstance(rng, 1 + static_cast<int>(UniformIndex(rng, 3)), 4, 2);
    DecodeGraph g = BuildGraph(in.grammar, in.lexicon);
    g.self_loop_logprob = -1.0;
    g.advance_logprob = -1.0;
    for (double &e : g.word_entry_logprob) e = -2.0;
    const int frames = g.MinFrames() + static_cast<int>(UniformIndex(rng, 5));
    FeatureMatrix em(frames, in.num_phonemes);
    for (Eigen::Index i = 0; i < em.size(); ++i)
      em(i) = -static_cast<double>(UniformIndex(rng, 2));
    const Oracle want = Enumerate(em, g, in.lexicon);
    const DecodeResult got = ViterbiDecodeScores(em, g);
    REQUIRE(got.score == want.score);
    REQUIRE(got.words == want.words);
    ties += want.num_best > 1;
  }
  CHECK(ties > 50);

  Lexicon lex;
  lex.Add("zulu", {0, 1});
  lex.Add("alpha", {0, 1});
  const DecodeGraph homophones =
      BuildGraph(Grammar(std::vector<GrammarSlot>{{"w", {"zulu", "alpha"}}}), lex);
  FeatureMatrix post(4, 2);
  post << 0.9, 0.1, 0.9, 0.1, 0.1, 0.9, 0.1, 0.9;
  CHECK(ViterbiDecode(post, homophones).words == std::vector<std::string>{"alpha"});
}

TEST_CASE("viterbi basics") {
  const Grammar gr = ParseGrammar("a: bin lay\nb: red blue\nc: one two\n", "g");
  Lexicon lex;
  lex.Add("bin", {0, 1});
  lex.Add("lay", {2});
  lex.Add("red", {1, 3});
  lex.Add("blue", {3, 0, 2});
  lex.Add("one", {2, 1});
  lex.Add("two", {0});
  const DecodeGraph g = BuildGraph(gr, lex);

  // One-hot posteriors along a true alignment recover the sentence.
  const std::vector<std::string> truth = {"lay", "blue", "one"};
  std::vector<int> labels;
  for (const auto &w : truth)
    for (int p : lex.Pronunciation(w)) labels.insert(labels.end(), 3, p);
  FeatureMatrix onehot = FeatureMatrix::Constant(labels.size(), 4, 1e-6);
  for (size_t t = 0; t < labels.size(); ++t) onehot(t, labels[t]) = 1.0;
  CHECK(ViterbiDecode(onehot, g).words == truth);
  Eigen::VectorXd pri = Eigen::VectorXd::Constant(4, 0.25);
  CHECK(ViterbiDecode(onehot, g, pri).words == truth);

  // Adding a per-frame constant to the log emissions leaves the path alone.
  Rng rng(2);
  const FeatureMatrix post = RandomPosteriors(rng, 12, 4);
  FeatureMatrix em = EmissionScores(post, std::nullopt);
  const DecodeResult base = ViterbiDecodeScores(em, g);
  for (Eigen::Index t = 0; t < em.rows(); ++t) em.row(t).array() += 3.0 * UniformUnit(rng) - 1.5;
  CHECK(ViterbiDecodeScores(em, g).state_path == base.state_path);

  CHECK_THROWS_AS(ViterbiDecode(RandomPosteriors(rng, g.MinFrames() - 1, 4), g), DataError);
  CHECK_THROWS_AS(ViterbiDecode(post, g, Eigen::VectorXd::Constant(3, 0.3)), DataError);
  CHECK_THROWS_AS(ViterbiDecode(RandomPosteriors(rng, 12, 3), g), DataError);
}

TEST_CASE("frame accuracy") {
  const Alignment align{{0, 0, 4}, {2, 4, 10}};
  FeatureMatrix right = FeatureMatrix::Zero(10, 3), wrong = FeatureMatrix::Zero(10, 3);
  for (const auto &seg : align)
    for (int t = seg.start; t < seg.end; ++t) {
      right(t, seg.phoneme) = 1.0;
      wrong(t, 1) = 1.0;
    }
  CHECK(FrameAccuracy(right, align) == 1.0);
  CHECK(FrameAccuracy(wrong, align) == 0.0);
  CHECK_THROWS_AS(FrameAccuracy(right, {{0, 0, 4}, {2, 5, 10}}), DataError);

  Rng rng(8);
  const int T = 20000, K = 5;
  const FeatureMatrix post = RandomPosteriors(rng, T, K);
  Alignment long_align;
  for (int t = 0; t < T; t += 10) long_align.push_back({(t / 10) % K, t, t + 10});
  const double acc = FrameAccuracy(post, long_align);
  const double sigma = std::sqrt(0.2 * 0.8 / T);
  CHECK(std::abs(acc - 0.2) <= 3 * sigma);
}

TEST_CASE("wer golden pairs") {
  std::ifstream in(std::string(AVST_TEST_DATA_DIR) + "/wer_golden.tsv");
  REQUIRE(in.good());
  std::string line;
  int rows = 0;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, '\t')) f.push_back(field);
    if (line.back() == '\t') f.push_back("");
    REQUIRE(f.size() == 6);
    const WerReport r = ComputeWer(SplitWhitespace(f[0]), SplitWhitespace(f[1]));
    INFO(line);
    CHECK(r.substitutions == std::stoi(f[2]));
    CHECK(r.deletions == std::stoi(f[3]));
    CHECK(r.insertions == std::stoi(f[4]));
    CHECK(r.reference_words == std::stoi(f[5]));
    ++rows;
  }
  CHECK(rows == 50);
}

TEST_CASE("wer properties") {
  const std::vector<std::string> ref = {"bin", "blue", "at", "f", "two", "now"};
  CHECK(ComputeWer(ref, ref).Wer() == 0.0);
  const WerReport none = ComputeWer(ref, {});
  CHECK(none.deletions == 6);
  CHECK(none.Wer() == 1.0);
  std::vector<std::string> one = ref;
  one[3] = "g";
  CHECK(FormatPercent(ComputeWer(ref, one).Wer()) == "16.7%");
  CHECK_THROWS_AS(ComputeWer({}, ref), DataError);

  Rng rng(4);
  const std::vector<std::string> vocab = {"a", "b", "c", "d"};
  auto random_seq = [&](int min_len) {
    std::vector<std::string> s(min_len + UniformIndex(rng, 6));
    for (auto &w : s) w = vocab[UniformIndex(rng, vocab.size())];
    return s;
  };
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = random_seq(1), b = random_seq(1), c = random_seq(1);
    const int ab = ComputeWer(a, b).Errors(), ba = ComputeWer(b, a).Errors();
    REQUIRE(ab == ba);
    REQUIRE(ComputeWer(a, b).Wer() * a.size() == doctest::Approx(ComputeWer(b, a).Wer() * b.size()));
    REQUIRE(ComputeWer(a, c).Errors() <= ab + ComputeWer(b, c).Errors());
    const WerReport r = ComputeWer(a, b);
    REQUIRE(static_cast<int>(a.size()) - r.deletions + r.insertions == static_cast<int>(b.size()));
  }
  WerReport sum = ComputeWer(ref, one);
  sum += none;
  CHECK(sum.reference_words == 12);
  CHECK(sum.Errors() == 7);
}

}  // namespace avst

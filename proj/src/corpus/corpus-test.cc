// src/corpus/corpus-test.cc

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

#include <filesystem>
#include <map>
#include <random>
#include <set>

#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/corpus/alignment.h"
#include "avst/corpus/manifest.h"
#include "avst/corpus/mixing.h"
#include "avst/corpus/splits.h"
#include "avst/corpus/synthetic.h"
#include "avst/corpus/wave-io.h"
#include "avst/decoder/grammar.h"
#include "avst/dsp/log-mel.h"
#include "doctest.h"

namespace avst {
namespace {

Manifest DeskManifest(int speakers, int per_speaker) {
  Manifest m;
  m.num_speakers = speakers;
  for (int s = 0; s < speakers; ++s)
    for (int u = 0; u < per_speaker; ++u) {
      ManifestEntry e;
      e.utt_id = "s" + std::to_string(s) + "_" + std::to_string(u);
      e.speaker_id = s;
      e.wav = e.utt_id + ".wav";
      e.transcript = {"bin", "red", "one"};
      m.entries.push_back(e);
    }
  return m;
}

Waveform RandomWave(int n, unsigned seed, int rate = 16000) {
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  Waveform w;
  w.sample_rate = rate;
  w.samples.resize(n);
  for (double &x : w.samples) x = u(gen);
  return w;
}

SyntheticSpec SmallSpec() {
  SyntheticSpec s;
  s.num_speakers = 3;
  s.utterances_per_speaker = 6;
  return s;
}

}  // namespace

TEST_CASE("manifest loading") {
  const std::string good =
      "{\"num_speakers\": 2}\n"
      "{\"utt_id\": \"a\", \"speaker_id\": 0, \"wav\": \"a.wav\", \"transcript\": \"bin red one\"}\n"
      "{\"utt_id\": \"b\", \"speaker_id\": 1, \"wav\": \"b.wav\", \"transcript\": \"lay blue two\", "
      "\"align\": \"b.ali\"}\n"
      "\n"
      "{\"utt_id\": \"c\", \"speaker_id\": 1, \"wav\": \"c.wav\", \"transcript\": \"set green four\", "
      "\"roi\": \"c.roi\"}\n";
  const Manifest m = ParseManifest(good, "m.jsonl", "base");
  CHECK(m.entries.size() == 3);
  CHECK(m.num_speakers == 2);
  CHECK(m.entries[1].align == std::optional<std::string>("b.ali"));
  CHECK(m.entries[2].transcript == std::vector<std::string>{"set", "green", "four"});
  CHECK(m.Find("c").speaker_id == 1);
  CHECK_THROWS_AS(m.Find("zz"), DataError);
  const Manifest again = ParseManifest(FormatManifest(m), "again", "base");
  CHECK(FormatManifest(again) == FormatManifest(m));

  const std::string dup =
      "{\"num_speakers\": 2}\n"
      "{\"utt_id\": \"a\", \"speaker_id\": 0, \"wav\": \"a.wav\", \"transcript\": \"x\"}\n"
      "{\"utt_id\": \"a\", \"speaker_id\": 1, \"wav\": \"b.wav\", \"transcript\": \"x\"}\n";
  try {
    ParseManifest(dup, "dup.jsonl", ".");
    FAIL("expected an error");
  } catch (const DataError &e) {
    const std::string msg = e.what();
    CHECK(msg.find("dup.jsonl:3") != std::string::npos);
    CHECK(msg.find("'a'") != std::string::npos);
  }
  const std::string range =
      "{\"num_speakers\": 2}\n"
      "{\"utt_id\": \"a\", \"speaker_id\": 2, \"wav\": \"a.wav\", \"transcript\": \"x\"}\n";
  try {
    ParseManifest(range, "r.jsonl", ".");
    FAIL("expected an error");
  } catch (const DataError &e) {
    CHECK(std::string(e.what()).find("r.jsonl:2") != std::string::npos);
    CHECK(std::string(e.what()).find("out of range") != std::string::npos);
  }
  CHECK_THROWS_AS(ParseManifest("{\"num_speakers\": 1}\n{not json\n", "bad", "."), DataError);
  CHECK_THROWS_AS(ParseManifest("{\"utt_id\": \"a\"}\n", "nohdr", "."), DataError);
}

TEST_CASE("splits at full corpus proportions") {
  const Manifest m = DeskManifest(31, 1000);
  SplitRatios r{15395.0 / 31000.0, 548.0 / 31000.0, 540.0 / 31000.0};
  const SplitSet s = MakeSplits(m, r, 1);
  CHECK(std::abs(static_cast<int>(s.train.size()) - 15395) <= 31);
  CHECK(std::abs(static_cast<int>(s.valid.size()) - 548) <= 31);
  CHECK(std::abs(static_cast<int>(s.test.size()) - 540) <= 31);
  CHECK(s.train.size() + s.valid.size() + s.test.size() + s.background.size() == 31000);
  ValidateSplits(s, m);
  std::set<int> train_speakers;
  for (const auto &id : s.train) train_speakers.insert(m.Find(id).speaker_id);
  CHECK(train_speakers.size() == 31);
}

TEST_CASE("split boundary cases and determinism") {
  const Manifest m = DeskManifest(4, 10);
  const SplitSet all = MakeSplits(m, SplitRatios{1.0, 0.0, 0.0}, 3);
  CHECK(all.train.size() == 40);
  CHECK(all.valid.empty());
  CHECK(all.test.empty());
  CHECK(all.background.empty());
  const SplitRatios r{0.5, 0.1, 0.3};
  CHECK(MakeSplits(m, r, 5) == MakeSplits(m, r, 5));
  CHECK(!(MakeSplits(m, r, 5) == MakeSplits(m, r, 6)));
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const SplitSet s = MakeSplits(m, r, seed);
    std::set<std::string> seen;
    for (const auto *l : {&s.train, &s.valid, &s.test, &s.background})
      for (const auto &id : *l) REQUIRE(seen.insert(id).second);
    REQUIRE(seen.size() == 40);
  }
  CHECK_THROWS_AS(MakeSplits(DeskManifest(2, 2), r, 1), DataError);
  CHECK_THROWS_AS(MakeSplits(m, SplitRatios{0.8, 0.3, 0.0}, 1), UsageError);
  const SplitSet s = MakeSplits(m, r, 9);
  CHECK(ParseSplits(FormatSplits(s), "mem") == s);
  SplitSet overlap = s;
  overlap.valid.push_back(s.train.front());
  CHECK_THROWS_AS(ValidateSplits(overlap, m), DataError);
}

TEST_CASE("background pairing") {
  const Manifest two = DeskManifest(2, 5);
  std::vector<const ManifestEntry *> pool;
  for (const auto &e : two.entries) pool.push_back(&e);
  for (int i = 0; i < 5; ++i) {
    const MixturePair p = PairBackground(two.entries[i], pool, 17);
    CHECK(two.Find(p.background).speaker_id == 1);
    CHECK(p.target == two.entries[i].utt_id);
  }
  const MixturePair a = PairBackground(two.entries[0], pool, 4);
  const MixturePair b = PairBackground(two.entries[0], pool, 4);
  CHECK(a.background == b.background);
  CHECK(a.seed == 4);

  std::vector<const ManifestEntry *> own;
  for (const auto &e : two.entries)
    if (e.speaker_id == 0) own.push_back(&e);
  CHECK_THROWS_AS(PairBackground(two.entries[0], own, 1), DataError);

  const Manifest many = DeskManifest(5, 8);
  std::vector<const ManifestEntry *> all;
  for (const auto &e : many.entries) all.push_back(&e);
  std::map<std::string, int> counts;
  for (uint64_t seed = 0; seed < 10000; ++seed) {
    const ManifestEntry &t = many.entries[seed % many.entries.size()];
    const MixturePair p = PairBackground(t, all, seed);
    REQUIRE(many.Find(p.background).speaker_id != t.speaker_id);
    if (t.utt_id == many.entries[0].utt_id) ++counts[p.background];
  }
  // 250 draws for entry 0 over 32 eligible partners: every partner shows up.
  CHECK(counts.size() == 32);
}

TEST_CASE("mixing follows the sample-wise definition") {
  const Waveform t = RandomWave(48000, 1), b = RandomWave(52000, 2);
  const Waveform m = MixWaveforms(t, b);
  CHECK(m.samples.size() == 48000);
  for (size_t i = 0; i < m.samples.size(); ++i) REQUIRE(m.samples[i] == 0.5 * (t.samples[i] + b.samples[i]));

  const Waveform short_b = RandomWave(1000, 3);
  const Waveform ms = MixWaveforms(t, short_b);
  for (size_t i = 0; i < ms.samples.size(); ++i) {
    const double bg = i < short_b.samples.size() ? short_b.samples[i] : 0.0;
    REQUIRE(ms.samples[i] == 0.5 * (t.samples[i] + bg));
  }

  Waveform zero = t;
  std::fill(zero.samples.begin(), zero.samples.end(), 0.0);
  const Waveform half = MixWaveforms(t, zero);
  for (size_t i = 0; i < t.samples.size(); ++i) REQUIRE(half.samples[i] == 0.5 * t.samples[i]);

  const Waveform b2 = RandomWave(48000, 4);
  const Waveform tb = MixWaveforms(t, b2), bt = MixWaveforms(b2, t);
  const Waveform t0 = MixWaveforms(t, zero), ob = MixWaveforms(zero, b2);
  double dev = 0.0;
  for (size_t i = 0; i < t.samples.size(); ++i) {
    REQUIRE(tb.samples[i] == bt.samples[i]);
    dev = std::max(dev, std::abs(t0.samples[i] + ob.samples[i] - tb.samples[i]));
    REQUIRE(std::abs(tb.samples[i]) <= 1.0);
  }
  CHECK(dev <= 1e-12);

  CHECK_THROWS_AS(MixWaveforms(t, RandomWave(10, 5, 8000)), DataError);
  CHECK_THROWS_AS(MixWaveforms(Waveform{}, b), DataError);
}

TEST_CASE("wav round trip") {
  Waveform w = RandomWave(1234, 8);
  QuantizeTo16Bit(&w.samples);
  const Waveform back = DecodeWav(EncodeWav(w), "mem");
  CHECK(back.sample_rate == 16000);
  CHECK(back.samples == w.samples);
  std::string bytes = EncodeWav(w);
  CHECK(bytes.substr(0, 4) == "RIFF");
  CHECK_THROWS_AS(DecodeWav(bytes.substr(0, 30), "mem"), DataError);
  bytes[0] = 'X';
  CHECK_THROWS_AS(DecodeWav(bytes, "mem"), DataError);
}

TEST_CASE("alignment validation") {
  const Alignment good{{0, 0, 3}, {2, 3, 5}, {1, 5, 9}};
  ValidateAlignment(good, 9, "good");
  CHECK(AlignmentLength(good) == 9);
  CHECK(AlignmentToLabels(good) == std::vector<int>{0, 0, 0, 2, 2, 1, 1, 1, 1});
  CHECK(AlignmentPhonemes(good) == std::vector<int>{0, 2, 1});
  CHECK_THROWS_AS(ValidateAlignment(good, 10, "short"), DataError);
  CHECK_THROWS_AS(ValidateAlignment({{0, 0, 3}, {1, 4, 9}}, 9, "gap"), DataError);
  CHECK_THROWS_AS(ValidateAlignment({{0, 0, 5}, {1, 4, 9}}, 9, "overlap"), DataError);
  CHECK_THROWS_AS(ValidateAlignment({{0, 1, 9}}, 9, "late"), DataError);
}

TEST_CASE("synthetic corpus") {
  const SyntheticSpec spec = SmallSpec();
  const SyntheticCorpus a = SynthesizeCorpus(spec);
  const SyntheticCorpus b = SynthesizeCorpus(spec);
  REQUIRE(a.utterances.size() == 18);
  CHECK(FormatManifest(a.manifest) == FormatManifest(b.manifest));
  const Grammar g = DefaultSyntheticGrammar();
  const Lexicon lex = DefaultSyntheticLexicon();
  const LogMelConfig logmel;
  for (size_t i = 0; i < a.utterances.size(); ++i) {
    const Utterance &u = a.utterances[i];
    CHECK(u.wave.samples == b.utterances[i].wave.samples);
    CHECK(u.visual->frames == b.utterances[i].visual->frames);
    CHECK(g.IsLegal(u.transcript));
    CHECK(AlignmentPhonemes(u.alignment) == ExpandToPhonemes(lex, u.transcript));
    const int frames = NumFrames(static_cast<int>(u.wave.samples.size()), logmel);
    ValidateAlignment(u.alignment, frames, u.utt_id);
    for (double x : u.wave.samples) REQUIRE(std::abs(x) <= 1.0);
  }
  SyntheticSpec other = spec;
  other.seed = 2;
  CHECK(SynthesizeCorpus(other).utterances[0].wave.samples != a.utterances[0].wave.samples);

  // Same sentence and durations, different speakers: different audio.
  SyntheticSpec quiet = spec;
  quiet.noise_stddev = 0.0;
  quiet.amplitude_min = quiet.amplitude_max = 0.5;
  quiet.min_frames_per_phoneme = quiet.max_frames_per_phoneme = 8;
  quiet.grammar = Grammar(std::vector<GrammarSlot>{{"only", {"bin"}}});
  const SyntheticCorpus q = SynthesizeCorpus(quiet);
  const Utterance &s0 = q.utterances[0];
  const Utterance &s1 = q.utterances[quiet.utterances_per_speaker];
  REQUIRE(s0.speaker_id != s1.speaker_id);
  REQUIRE(s0.transcript == s1.transcript);
  REQUIRE(s0.wave.samples.size() == s1.wave.samples.size());
  CHECK(s0.wave.samples != s1.wave.samples);

  SyntheticSpec bad = spec;
  bad.speaker_base_hz = {100, 100, 200};
  CHECK_THROWS_AS(bad.Validate(), UsageError);
  bad = spec;
  bad.lexicon = Lexicon();
  bad.lexicon.Add("bin", {0});
  CHECK_THROWS_AS(SynthesizeCorpus(bad), DataError);
}

TEST_CASE("synthetic corpus written to disk loads back identically") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "avst-corpus-test";
  fs::remove_all(dir);
  const SyntheticCorpus c = SynthesizeCorpus(SmallSpec());
  WriteSyntheticCorpus(c, dir.string());
  const Manifest m = LoadManifest((dir / "manifest.jsonl").string());
  REQUIRE(m.entries.size() == c.utterances.size());
  for (size_t i = 0; i < m.entries.size(); ++i) {
    const Utterance u = LoadUtterance(m, m.entries[i], true);
    CHECK(u.wave.samples == c.utterances[i].wave.samples);
    CHECK(u.alignment == c.utterances[i].alignment);
    CHECK(u.visual->frames == c.utterances[i].visual->frames);
    CHECK(u.transcript == c.utterances[i].transcript);
  }
  fs::remove_all(dir);
}

}  // namespace avst

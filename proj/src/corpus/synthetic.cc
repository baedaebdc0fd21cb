// src/corpus/synthetic.cc

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

#include "avst/corpus/synthetic.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/dsp/visual.h"

namespace avst {

Grammar DefaultSyntheticGrammar() {
  return Grammar({{"command", {"bin", "lay", "set"}},
                  {"color", {"red", "blue", "green"}},
                  {"digit", {"one", "two", "four"}}});
}

Lexicon DefaultSyntheticLexicon() {
  Lexicon lex;
  lex.Add("bin", {0, 1});
  lex.Add("lay", {2, 3});
  lex.Add("set", {4, 5, 0});
  lex.Add("red", {1, 4});
  lex.Add("blue", {3, 0, 2});
  lex.Add("green", {5, 2});
  lex.Add("one", {2, 5, 1});
  lex.Add("two", {4, 1});
  lex.Add("four", {0, 3});
  return lex;
}

std::vector<double> SyntheticSpec::BaseFrequencies() const {
  if (!speaker_base_hz.empty()) return speaker_base_hz;
  std::vector<double> out(num_speakers);
  for (int s = 0; s < num_speakers; ++s) out[s] = 150.0 + speaker_spacing_hz * s;
  return out;
}

std::vector<double> SyntheticSpec::PhonemeOffsets() const {
  if (!phoneme_offset_hz.empty()) return phoneme_offset_hz;
  std::vector<double> out(num_phonemes);
  for (int p = 0; p < num_phonemes; ++p) out[p] = phoneme_spacing_hz * p;
  return out;
}

void SyntheticSpec::Validate() const {
  if (num_speakers < 1) throw UsageError("synthetic.num_speakers must be >= 1");
  if (num_phonemes < 1) throw UsageError("synthetic.num_phonemes must be >= 1");
  const auto base = BaseFrequencies();
  const auto offsets = PhonemeOffsets();
  if (static_cast<int>(base.size()) != num_speakers)
    throw UsageError("synthetic.speaker_base_hz needs one entry per speaker");
  if (static_cast<int>(offsets.size()) != num_phonemes)
    throw UsageError("synthetic.phoneme_offset_hz needs one entry per phoneme");
  for (size_t i = 0; i < base.size(); ++i) {
    if (!(base[i] > 0)) throw UsageError("synthetic.speaker_base_hz must be positive");
    for (size_t j = 0; j < i; ++j)
      if (base[i] == base[j])
        throw UsageError("synthetic.speaker_base_hz must differ between speakers");
  }
  for (double o : offsets)
    if (o < 0) throw UsageError("synthetic.phoneme_offset_hz must be nonnegative");
  const double top = *std::max_element(base.begin(), base.end()) +
                     *std::max_element(offsets.begin(), offsets.end());
  if (top >= 0.5 * sample_rate)
    throw UsageError("synthetic tone frequencies exceed the Nyquist frequency");
  if (min_frames_per_phoneme < 1 || max_frames_per_phoneme < min_frames_per_phoneme)
    throw UsageError("synthetic.frames_per_phoneme range is invalid");
  if (utterances_per_speaker < 1)
    throw UsageError("synthetic.utterances_per_speaker must be >= 1");
  if (sample_rate <= 0 || !(hop_seconds > 0) || !(window_seconds >= hop_seconds))
    throw UsageError("synthetic frame geometry is invalid");
  if (!(amplitude_min > 0) || amplitude_max < amplitude_min || amplitude_max > 1.0)
    throw UsageError("synthetic amplitude range must lie in (0, 1]");
  if (noise_stddev < 0 || pixel_noise < 0)
    throw UsageError("synthetic noise levels must be nonnegative");
  if (visual && !(video_fps > 0)) throw UsageError("synthetic.video_fps must be positive");
  const Grammar g = grammar.NumSlots() ? grammar : DefaultSyntheticGrammar();
  const Lexicon l = lexicon.entries().empty() ? DefaultSyntheticLexicon() : lexicon;
  l.ValidateAgainst(g, num_phonemes);
}

Eigen::VectorXd RenderMouth(int phoneme, int num_phonemes, int speaker) {
  const int cols = static_cast<int>(std::ceil(std::sqrt(static_cast<double>(num_phonemes))));
  const int rows = (num_phonemes + cols - 1) / cols;
  const int c = phoneme % cols, r = phoneme / cols;
  const double half_w = 6.0 + 16.0 * c / std::max(1, cols - 1);
  const double half_h = 2.0 + 9.0 * r / std::max(1, rows - 1);
  const double cx = 29.5 + (speaker % 3) - 1, cy = 14.5;
  Eigen::VectorXd img(kRoiDim);
  for (int y = 0; y < kRoiHeight; ++y)
    for (int x = 0; x < kRoiWidth; ++x) {
      const double dx = (x - cx) / half_w, dy = (y - cy) / half_h;
      img(y * kRoiWidth + x) = dx * dx + dy * dy <= 1.0 ? 0.15 : 0.7;
    }
  return img;
}

namespace {

std::string UttId(int speaker, int index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "s%02d_u%04d", speaker, index);
  return buf;
}

}  // namespace

SyntheticCorpus SynthesizeCorpus(const SyntheticSpec &spec_in) {
  spec_in.Validate();
  SyntheticCorpus corpus;
  SyntheticSpec &spec = corpus.spec;
  spec = spec_in;
  spec.speaker_base_hz = spec_in.BaseFrequencies();
  spec.phoneme_offset_hz = spec_in.PhonemeOffsets();
  if (!spec.grammar.NumSlots()) spec.grammar = DefaultSyntheticGrammar();
  if (spec.lexicon.entries().empty()) spec.lexicon = DefaultSyntheticLexicon();

  const int hop = static_cast<int>(std::lround(spec.hop_seconds * spec.sample_rate));
  const int win = static_cast<int>(std::lround(spec.window_seconds * spec.sample_rate));
  const uint64_t num_sentences = spec.grammar.NumSentences();
  corpus.manifest.num_speakers = spec.num_speakers;

  for (int s = 0; s < spec.num_speakers; ++s) {
    for (int u = 0; u < spec.utterances_per_speaker; ++u) {
      Rng rng(DeriveSeed(DeriveSeed(spec.seed, static_cast<uint64_t>(s)),
                         static_cast<uint64_t>(u)));
      Utterance utt;
      utt.utt_id = UttId(s, u);
      utt.speaker_id = s;
      utt.transcript = spec.grammar.Sentence(UniformIndex(rng, num_sentences));
      const std::vector<int> phones = ExpandToPhonemes(spec.lexicon, utt.transcript);

      int frame = 0;
      for (int p : phones) {
        const int span = spec.max_frames_per_phoneme - spec.min_frames_per_phoneme + 1;
        const int d = spec.min_frames_per_phoneme +
                      static_cast<int>(UniformIndex(rng, static_cast<uint64_t>(span)));
        utt.alignment.push_back({p, frame, frame + d});
        frame += d;
      }
      const int total_frames = frame;

      // Tones with continuous phase; the last segment is extended so the
      // final analysis window is full and the frame count equals the
      // alignment length.
      utt.wave.sample_rate = spec.sample_rate;
      auto &x = utt.wave.samples;
      x.reserve(static_cast<size_t>(total_frames) * hop + win - hop);
      double phase = 2.0 * std::numbers::pi * UniformUnit(rng);
      for (size_t i = 0; i < utt.alignment.size(); ++i) {
        const auto &seg = utt.alignment[i];
        const double f = spec.speaker_base_hz[s] + spec.phoneme_offset_hz[seg.phoneme];
        const double amp = spec.amplitude_min +
                           (spec.amplitude_max - spec.amplitude_min) * UniformUnit(rng);
        int n = (seg.end - seg.start) * hop;
        if (i + 1 == utt.alignment.size()) n += win - hop;
        const double step = 2.0 * std::numbers::pi * f / spec.sample_rate;
        for (int k = 0; k < n; ++k) {
          x.push_back(amp * std::sin(phase));
          phase = std::fmod(phase + step, 2.0 * std::numbers::pi);
        }
      }
      for (double &v : x)
        v = std::clamp(v + spec.noise_stddev * StandardNormal(rng), -1.0, 1.0);
      QuantizeTo16Bit(&x);

      if (spec.visual) {
        VisualTrack track;
        track.fps = spec.video_fps;
        const double seconds = total_frames * spec.hop_seconds;
        const int num_video = std::max(1, static_cast<int>(std::ceil(seconds * spec.video_fps - 1e-9)));
        const std::vector<int> labels = AlignmentToLabels(utt.alignment);
        track.frames.resize(num_video, kRoiDim);
        for (int j = 0; j < num_video; ++j) {
          const double t_sec = (j + 0.5) / spec.video_fps;
          const int t = std::clamp(static_cast<int>(std::floor(t_sec / spec.hop_seconds)), 0,
                                   total_frames - 1);
          Eigen::VectorXd img = RenderMouth(labels[t], spec.num_phonemes, s);
          for (Eigen::Index i = 0; i < img.size(); ++i)
            img(i) = std::clamp(img(i) + spec.pixel_noise * StandardNormal(rng), 0.0, 1.0);
          track.frames.row(j) = img.transpose();
        }
        QuantizePixels(&track);
        utt.visual = std::move(track);
        utt.visual_path = "roi/" + utt.utt_id + ".roi";
      }

      ManifestEntry e;
      e.utt_id = utt.utt_id;
      e.speaker_id = s;
      e.wav = "wav/" + utt.utt_id + ".wav";
      e.transcript = utt.transcript;
      e.align = "align/" + utt.utt_id + ".ali";
      if (spec.visual) e.roi = *utt.visual_path;
      corpus.manifest.entries.push_back(std::move(e));
      corpus.utterances.push_back(std::move(utt));
    }
  }
  return corpus;
}

void WriteSyntheticCorpus(const SyntheticCorpus &corpus, const std::string &dir) {
  namespace fs = std::filesystem;
  for (const char *sub : {"wav", "align", "roi"}) fs::create_directories(fs::path(dir) / sub);
  for (size_t i = 0; i < corpus.utterances.size(); ++i) {
    const Utterance &u = corpus.utterances[i];
    const ManifestEntry &e = corpus.manifest.entries[i];
    WriteWav((fs::path(dir) / e.wav).string(), u.wave);
    WriteAlignment((fs::path(dir) / *e.align).string(), u.alignment);
    if (u.visual) WriteVisualTrack((fs::path(dir) / *e.roi).string(), *u.visual);
  }
  SaveManifest((fs::path(dir) / "manifest.jsonl").string(), corpus.manifest);
  WriteFileBytes((fs::path(dir) / "grammar.txt").string(), FormatGrammar(corpus.spec.grammar));
  WriteFileBytes((fs::path(dir) / "lexicon.txt").string(), FormatLexicon(corpus.spec.lexicon));
}

}  // namespace avst

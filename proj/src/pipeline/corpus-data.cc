// src/pipeline/corpus-data.cc

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

#include "avst/pipeline/corpus-data.h"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/corpus/synthetic.h"
#include "avst/dsp/log-mel.h"
#include "avst/dsp/visual.h"

namespace avst {

const Utterance &CorpusData::Get(const std::string &utt_id) const {
  auto it = index.find(utt_id);
  if (it == index.end()) throw DataError("unknown utterance '" + utt_id + "'");
  return utterances[it->second];
}

CorpusData MakeCorpusData(Manifest manifest, std::vector<Utterance> utterances, Grammar grammar,
                          Lexicon lexicon, SplitSet splits, int num_phonemes) {
  if (utterances.size() != manifest.entries.size())
    throw DataError("utterance list does not match the manifest");
  manifest.Validate();
  ValidateSplits(splits, manifest);
  lexicon.ValidateAgainst(grammar, num_phonemes);
  CorpusData d;
  d.manifest = std::move(manifest);
  d.utterances = std::move(utterances);
  d.grammar = std::move(grammar);
  d.lexicon = std::move(lexicon);
  d.splits = std::move(splits);
  d.num_phonemes = num_phonemes;
  for (size_t i = 0; i < d.utterances.size(); ++i) {
    const Utterance &u = d.utterances[i];
    if (!d.grammar.IsLegal(u.transcript))
      throw DataError(u.utt_id + ": transcript is not a legal grammar sentence");
    d.index[u.utt_id] = static_cast<int>(i);
  }
  d.has_visual = true;
  for (const auto *list : {&d.splits.train, &d.splits.valid, &d.splits.test})
    for (const auto &id : *list)
      if (!d.Get(id).visual) d.has_visual = false;
  return d;
}

CorpusData LoadCorpus(const ExperimentConfig &cfg) {
  cfg.Validate();
  const CorpusSource &src = cfg.corpus;
  if (src.synthetic) {
    SyntheticSpec spec = *src.synthetic;
    if (!src.grammar.empty()) spec.grammar = LoadGrammar(src.grammar);
    if (!src.lexicon.empty()) spec.lexicon = LoadLexicon(src.lexicon);
    SyntheticCorpus corpus = SynthesizeCorpus(spec);
    SplitSet splits = src.splits.empty()
                          ? MakeSplits(corpus.manifest, cfg.split_ratios, cfg.split_seed)
                          : LoadSplits(src.splits);
    const int k = src.num_phonemes > 0 ? src.num_phonemes : corpus.spec.num_phonemes;
    return MakeCorpusData(std::move(corpus.manifest), std::move(corpus.utterances),
                          corpus.spec.grammar, corpus.spec.lexicon, std::move(splits), k);
  }
  Manifest manifest = LoadManifest(src.manifest);
  std::vector<Utterance> utterances;
  utterances.reserve(manifest.entries.size());
  for (const auto &e : manifest.entries) utterances.push_back(LoadUtterance(manifest, e, true));
  Grammar grammar = LoadGrammar(src.grammar);
  Lexicon lexicon = LoadLexicon(src.lexicon);
  int k = src.num_phonemes;
  if (k == 0)
    for (const auto &[word, phones] : lexicon.entries())
      for (int p : phones) k = std::max(k, p + 1);
  SplitSet splits = src.splits.empty() ? MakeSplits(manifest, cfg.split_ratios, cfg.split_seed)
                                       : LoadSplits(src.splits);
  return MakeCorpusData(std::move(manifest), std::move(utterances), std::move(grammar),
                        std::move(lexicon), std::move(splits), k);
}

std::vector<MixturePair> PairMixtures(const CorpusData &data,
                                      const std::vector<std::string> &targets, uint64_t seed) {
  std::vector<const ManifestEntry *> pool;
  for (const auto &id : data.splits.background)
    pool.push_back(&data.manifest.entries[data.index.at(id)]);
  std::vector<MixturePair> out;
  out.reserve(targets.size());
  for (const auto &id : targets) {
    auto it = data.index.find(id);
    if (it == data.index.end()) throw DataError("unknown utterance '" + id + "'");
    out.push_back(PairBackground(data.manifest.entries[it->second], pool, seed));
  }
  return out;
}

Waveform ModelAudio(const CorpusData &data, const std::string &target,
                    const std::string &background, double gain) {
  const Utterance &t = data.Get(target);
  if (background.empty()) return t.wave;
  Waveform mixed = MixWaveforms(t.wave, data.Get(background).wave, gain);
  QuantizeTo16Bit(&mixed.samples);
  return mixed;
}

FeatureMatrix AcousticFeatures(const Waveform &wave, const LogMelConfig &logmel,
                               int context_radius) {
  if (wave.sample_rate != logmel.sample_rate)
    throw DataError("waveform sample rate " + std::to_string(wave.sample_rate) +
                    " differs from logmel.sample_rate " + std::to_string(logmel.sample_rate));
  return StackContext(NormalizeFeatures(ComputeLogMel(wave.samples, logmel)), context_radius);
}

PreparedSet PrepareSet(const CorpusData &data, const std::vector<std::string> &ids,
                       Condition condition, const ExperimentConfig &cfg) {
  if (ids.empty()) throw DataError("cannot prepare an empty split");
  std::vector<MixturePair> pairs;
  if (condition == Condition::kTwoSpeaker) pairs = PairMixtures(data, ids, cfg.mixture_seed);

  PreparedSet out;
  FrameDataset &fd = out.frames;
  fd.num_speakers = data.manifest.num_speakers;
  std::vector<float> acoustic, visual;
  int acoustic_dim = -1, num_visual = 0;
  for (size_t i = 0; i < ids.size(); ++i) {
    const Utterance &u = data.Get(ids[i]);
    PreparedUtterance info;
    info.utt_id = u.utt_id;
    info.background = pairs.empty() ? std::string() : pairs[i].background;
    info.speaker_id = u.speaker_id;
    info.transcript = u.transcript;
    info.first_frame = fd.NumFrames();

    const FeatureMatrix feat =
        AcousticFeatures(ModelAudio(data, u.utt_id, info.background, cfg.mixture_gain),
                         cfg.logmel, cfg.context_radius);
    const int t_frames = static_cast<int>(feat.rows());
    if (u.alignment.empty()) throw DataError(u.utt_id + ": no alignment");
    if (AlignmentLength(u.alignment) != t_frames)
      throw DataError(u.utt_id + ": " + std::to_string(t_frames) +
                      " feature frames but the alignment covers " +
                      std::to_string(AlignmentLength(u.alignment)));
    ValidateAlignment(u.alignment, t_frames, u.utt_id);
    const std::vector<int> labels = AlignmentToLabels(u.alignment);
    for (int y : labels)
      if (y >= data.num_phonemes)
        throw DataError(u.utt_id + ": label " + std::to_string(y) + " exceeds the " +
                        std::to_string(data.num_phonemes) + "-label inventory");
    acoustic_dim = static_cast<int>(feat.cols());
    const Eigen::MatrixXf f = feat.cast<float>();
    for (int t = 0; t < t_frames; ++t)
      for (int c = 0; c < acoustic_dim; ++c) acoustic.push_back(f(t, c));

    int visual_base = -1, n_video = 0;
    if (data.has_visual) {
      const VisualTrack &track = *u.visual;
      n_video = static_cast<int>(track.frames.rows());
      visual_base = num_visual;
      for (int j = 0; j < n_video; ++j)
        for (int c = 0; c < kRoiDim; ++c) visual.push_back(static_cast<float>(track.frames(j, c)));
      num_visual += n_video;
    }
    for (int t = 0; t < t_frames; ++t) {
      fd.label.push_back(labels[t]);
      fd.speaker.push_back(u.speaker_id);
      fd.utterance.push_back(static_cast<int>(i));
      fd.visual_row.push_back(
          visual_base < 0
              ? -1
              : visual_base + VisualFrameIndex(t, cfg.logmel.hop_length,
                                               u.visual->fps, n_video));
    }
    info.num_frames = t_frames;
    out.utterances.push_back(std::move(info));
  }
  fd.acoustic = Eigen::Map<FloatRows>(acoustic.data(), fd.NumFrames(), acoustic_dim);
  if (num_visual > 0) fd.visual = Eigen::Map<FloatRows>(visual.data(), num_visual, kRoiDim);
  return out;
}

PreparedSet SelectSpeaker(const PreparedSet &set, int speaker_id) {
  PreparedSet out;
  std::vector<int> frames;
  for (const auto &u : set.utterances) {
    if (u.speaker_id != speaker_id) continue;
    PreparedUtterance copy = u;
    copy.first_frame = static_cast<int>(frames.size());
    for (int t = 0; t < u.num_frames; ++t) frames.push_back(u.first_frame + t);
    out.utterances.push_back(std::move(copy));
  }
  out.frames = SelectFrames(set.frames, frames);
  // Utterance indices refer to positions in `out.utterances`.
  int utt = -1, prev = -1;
  for (int &idx : out.frames.utterance) {
    if (idx != prev) {
      prev = idx;
      ++utt;
    }
    idx = utt;
  }
  return out;
}

namespace {

constexpr char kSetMagic[4] = {'P', 'S', 'E', 'T'};
constexpr uint32_t kSetVersion = 1;

void WriteString(std::ostream &os, const std::string &s) {
  WriteU32(os, static_cast<uint32_t>(s.size()));
  WriteBytes(os, s);
}

std::string ReadString(std::istream &is) {
  const uint32_t n = ReadU32(is, "string length");
  return ReadBytes(is, n, "string");
}

void WriteInts(std::ostream &os, const std::vector<int> &v) {
  WriteU32(os, static_cast<uint32_t>(v.size()));
  for (int x : v) WriteU32(os, static_cast<uint32_t>(x));
}

std::vector<int> ReadInts(std::istream &is) {
  std::vector<int> v(ReadU32(is, "vector length"));
  for (int &x : v) x = static_cast<int>(ReadU32(is, "vector element"));
  return v;
}

void WriteRows(std::ostream &os, const FloatRows &m) {
  WriteU32(os, static_cast<uint32_t>(m.rows()));
  WriteU32(os, static_cast<uint32_t>(m.cols()));
  os.write(reinterpret_cast<const char *>(m.data()),
           static_cast<std::streamsize>(m.size() * sizeof(float)));
}

FloatRows ReadRows(std::istream &is) {
  const uint32_t rows = ReadU32(is, "rows"), cols = ReadU32(is, "cols");
  FloatRows m(rows, cols);
  is.read(reinterpret_cast<char *>(m.data()),
          static_cast<std::streamsize>(m.size() * sizeof(float)));
  if (!is) throw DataError("truncated input while reading frame matrix");
  return m;
}

}  // namespace

void WritePreparedSet(const std::string &path, const PreparedSet &set) {
  std::ostringstream os;
  os.write(kSetMagic, 4);
  WriteU32(os, kSetVersion);
  WriteU32(os, static_cast<uint32_t>(set.utterances.size()));
  for (const auto &u : set.utterances) {
    WriteString(os, u.utt_id);
    WriteString(os, u.background);
    WriteU32(os, static_cast<uint32_t>(u.speaker_id));
    WriteU32(os, static_cast<uint32_t>(u.transcript.size()));
    for (const auto &w : u.transcript) WriteString(os, w);
    WriteU32(os, static_cast<uint32_t>(u.first_frame));
    WriteU32(os, static_cast<uint32_t>(u.num_frames));
  }
  const FrameDataset &fd = set.frames;
  WriteRows(os, fd.acoustic);
  WriteRows(os, fd.visual);
  WriteInts(os, fd.visual_row);
  WriteInts(os, fd.speaker);
  WriteInts(os, fd.label);
  WriteInts(os, fd.utterance);
  WriteU32(os, static_cast<uint32_t>(fd.num_speakers));
  WriteFileBytes(path, os.str());
}

PreparedSet ReadPreparedSet(const std::string &path) {
  std::istringstream is(ReadFileBytes(path));
  ExpectMagic(is, kSetMagic, path);
  if (ReadU32(is, "version") != kSetVersion) throw DataError(path + ": unsupported version");
  PreparedSet set;
  set.utterances.resize(ReadU32(is, "utterance count"));
  for (auto &u : set.utterances) {
    u.utt_id = ReadString(is);
    u.background = ReadString(is);
    u.speaker_id = static_cast<int>(ReadU32(is, "speaker"));
    u.transcript.resize(ReadU32(is, "transcript length"));
    for (auto &w : u.transcript) w = ReadString(is);
    u.first_frame = static_cast<int>(ReadU32(is, "first frame"));
    u.num_frames = static_cast<int>(ReadU32(is, "frame count"));
  }
  FrameDataset &fd = set.frames;
  fd.acoustic = ReadRows(is);
  fd.visual = ReadRows(is);
  fd.visual_row = ReadInts(is);
  fd.speaker = ReadInts(is);
  fd.label = ReadInts(is);
  fd.utterance = ReadInts(is);
  fd.num_speakers = static_cast<int>(ReadU32(is, "speaker count"));
  if (is.peek() != std::char_traits<char>::eof()) throw DataError(path + ": trailing bytes");
  return set;
}

}  // namespace avst

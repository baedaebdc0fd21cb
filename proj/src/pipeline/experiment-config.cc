// src/pipeline/experiment-config.cc

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

#include "avst/pipeline/experiment-config.h"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <set>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"
#include "avst/base/random.h"
#include "avst/base/text-utils.h"
#include "json.hpp"

namespace avst {

using Json = nlohmann::ordered_json;

std::string ModelKindName(ModelKind k) {
  switch (k) {
    case ModelKind::kSI: return "si";
    case ModelKind::kSTA: return "st-a";
    case ModelKind::kSTB: return "st-b";
    case ModelKind::kSTC: return "st-c";
    case ModelKind::kSD: return "sd";
  }
  return "?";
}

std::string ConditionName(Condition c) {
  return c == Condition::kOneSpeaker ? "one" : "two";
}

ModelKind ParseModelKind(const std::string &s) {
  for (ModelKind k : {ModelKind::kSI, ModelKind::kSTA, ModelKind::kSTB, ModelKind::kSTC,
                      ModelKind::kSD})
    if (ModelKindName(k) == s) return k;
  throw UsageError("unknown model kind '" + s + "' (expected si, st-a, st-b, st-c or sd)");
}

Condition ParseCondition(const std::string &s) {
  if (s == "one") return Condition::kOneSpeaker;
  if (s == "two") return Condition::kTwoSpeaker;
  throw UsageError("unknown condition '" + s + "' (expected one or two)");
}

FusionVariant KindVariant(ModelKind k) {
  switch (k) {
    case ModelKind::kSTA: return FusionVariant::kA;
    case ModelKind::kSTB: return FusionVariant::kB;
    case ModelKind::kSTC: return FusionVariant::kC;
    default: return FusionVariant::kNone;
  }
}

std::string Cell::Name() const {
  std::string m = ModalityName(modality);
  std::transform(m.begin(), m.end(), m.begin(), [](unsigned char c) { return std::tolower(c); });
  return ModelKindName(kind) + "/" + m + "/" + ConditionName(condition);
}

Cell Cell::Parent() const { return Cell{ModelKind::kSI, modality, condition}; }

Cell ParseCell(const std::string &name) {
  const size_t a = name.find('/');
  const size_t b = a == std::string::npos ? a : name.find('/', a + 1);
  if (b == std::string::npos || name.find('/', b + 1) != std::string::npos)
    throw UsageError("cell '" + name + "' must look like kind/modality/condition, e.g. si/a/two");
  Cell c;
  c.kind = ParseModelKind(name.substr(0, a));
  c.modality = ParseModality(name.substr(a + 1, b - a - 1));
  if (c.modality != Modality::kA && c.modality != Modality::kAV)
    throw UsageError("cell '" + name + "': modality must be a or av");
  c.condition = ParseCondition(name.substr(b + 1));
  return c;
}

std::vector<Cell> FullMatrix() {
  std::vector<Cell> out;
  for (ModelKind k : {ModelKind::kSI, ModelKind::kSTA, ModelKind::kSTB, ModelKind::kSTC,
                      ModelKind::kSD})
    for (Modality m : {Modality::kA, Modality::kAV})
      for (Condition c : {Condition::kOneSpeaker, Condition::kTwoSpeaker})
        out.push_back(Cell{k, m, c});
  return out;
}

void ExperimentConfig::Validate() const {
  if (corpus.synthetic) {
    corpus.synthetic->Validate();
    if (!corpus.manifest.empty())
      throw UsageError("corpus: give either synthetic or manifest, not both");
  } else {
    if (corpus.manifest.empty()) throw UsageError("corpus.manifest is required");
    if (corpus.grammar.empty()) throw UsageError("corpus.grammar is required with a manifest");
    if (corpus.lexicon.empty()) throw UsageError("corpus.lexicon is required with a manifest");
  }
  if (corpus.num_phonemes < 0) throw UsageError("corpus.num_phonemes must be nonnegative");
  const SplitRatios &r = split_ratios;
  if (!(r.train > 0.0) || r.valid < 0.0 || r.test < 0.0 || r.train + r.valid + r.test > 1.0 + 1e-9)
    throw UsageError("splits: ratios must be nonnegative with train > 0 and a sum of at most 1");
  logmel.Validate();
  if (context_radius < 0) throw UsageError("context_radius must be nonnegative");
  if (!(mixture_gain > 0.0)) throw UsageError("mixture.gain must be positive");
  const auto &a = architecture;
  if (a.num_hidden_layers < 1) throw UsageError("architecture.num_hidden_layers must be >= 1");
  if (a.hidden_width < 1) throw UsageError("architecture.hidden_width must be >= 1");
  if (a.identity_embed_dim < 1) throw UsageError("architecture.identity_embed_dim must be >= 1");
  if (a.injection_layer < 1 || a.injection_layer >= a.num_hidden_layers)
    throw UsageError("architecture.injection_layer must lie in [1, num_hidden_layers)");
  if (a.identity_dim < 0) throw UsageError("architecture.identity_dim must be nonnegative");
  if (!(a.near_identity_noise >= 0.0))
    throw UsageError("architecture.near_identity_noise must be nonnegative");
  train.Validate();
  adapt.Validate();
  if (!(decoder.self_loop_prob > 0.0 && decoder.self_loop_prob < 1.0))
    throw UsageError("decoder.self_loop_prob must lie in (0, 1)");
  std::set<std::string> seen;
  for (const Cell &c : cells)
    if (!seen.insert(c.Name()).second) throw UsageError("cells: '" + c.Name() + "' is repeated");
  for (int s : sd_speakers)
    if (s < 0) throw UsageError("sd_speakers: negative speaker id");
}

std::vector<Cell> ExperimentConfig::ResolvedCells() const {
  return cells.empty() ? FullMatrix() : cells;
}

namespace {

// Reads the members of one JSON object and rejects members nobody asked for.
class ObjectReader {
 public:
  ObjectReader(const Json &j, std::string path) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw UsageError(Where() + "must be an object");
  }

  template <typename T>
  void Get(const char *key, T *out) {
    used_.insert(key);
    if (!j_.contains(key)) return;
    try {
      *out = j_.at(key).get<T>();
    } catch (const nlohmann::json::exception &) {
      throw UsageError(Field(key) + " has the wrong type");
    }
  }

  bool Has(const char *key) const { return j_.contains(key); }

  ObjectReader Child(const char *key) {
    used_.insert(key);
    return ObjectReader(j_.at(key), Field(key));
  }

  std::string Field(const char *key) const { return path_.empty() ? key : path_ + "." + key; }

  void Finish() const {
    for (const auto &item : j_.items())
      if (!used_.count(item.key()))
        throw UsageError("unknown config field '" + Field(item.key().c_str()) + "'");
  }

 private:
  std::string Where() const { return path_.empty() ? "config " : path_ + " "; }

  const Json &j_;
  std::string path_;
  std::set<std::string> used_;
};

void ReadSynthetic(ObjectReader r, SyntheticSpec *s) {
  r.Get("num_speakers", &s->num_speakers);
  r.Get("num_phonemes", &s->num_phonemes);
  r.Get("speaker_base_hz", &s->speaker_base_hz);
  r.Get("speaker_spacing_hz", &s->speaker_spacing_hz);
  r.Get("phoneme_offset_hz", &s->phoneme_offset_hz);
  r.Get("phoneme_spacing_hz", &s->phoneme_spacing_hz);
  r.Get("min_frames_per_phoneme", &s->min_frames_per_phoneme);
  r.Get("max_frames_per_phoneme", &s->max_frames_per_phoneme);
  r.Get("utterances_per_speaker", &s->utterances_per_speaker);
  r.Get("sample_rate", &s->sample_rate);
  r.Get("hop_seconds", &s->hop_seconds);
  r.Get("window_seconds", &s->window_seconds);
  r.Get("amplitude_min", &s->amplitude_min);
  r.Get("amplitude_max", &s->amplitude_max);
  r.Get("noise_stddev", &s->noise_stddev);
  r.Get("visual", &s->visual);
  r.Get("video_fps", &s->video_fps);
  r.Get("pixel_noise", &s->pixel_noise);
  r.Get("seed", &s->seed);
  r.Finish();
}

void ReadTrain(ObjectReader r, TrainConfig *t) {
  r.Get("learning_rate", &t->learning_rate);
  r.Get("batch_size", &t->batch_size);
  r.Get("max_epochs", &t->max_epochs);
  r.Get("patience", &t->patience);
  r.Get("freeze_copied", &t->freeze_copied);
  r.Finish();
}

Json TrainJson(const TrainConfig &t) {
  Json j;
  j["learning_rate"] = t.learning_rate;
  j["batch_size"] = t.batch_size;
  j["max_epochs"] = t.max_epochs;
  j["patience"] = t.patience;
  j["freeze_copied"] = t.freeze_copied;
  return j;
}

std::string Resolve(const std::string &base_dir, const std::string &path) {
  return path.empty() ? path : ResolvePath(base_dir, path);
}

}  // namespace

ExperimentConfig ParseExperimentConfig(const std::string &text, const std::string &source,
                                       const std::string &base_dir) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::exception &e) {
    throw UsageError(source + ": " + e.what());
  }
  ExperimentConfig cfg;
  try {
    ObjectReader r(j, "");
    r.Get("seed", &cfg.seed);
    if (r.Has("corpus")) {
      ObjectReader c = r.Child("corpus");
      if (c.Has("synthetic")) {
        SyntheticSpec spec;
        ReadSynthetic(c.Child("synthetic"), &spec);
        cfg.corpus.synthetic = spec;
      }
      c.Get("manifest", &cfg.corpus.manifest);
      c.Get("splits", &cfg.corpus.splits);
      c.Get("grammar", &cfg.corpus.grammar);
      c.Get("lexicon", &cfg.corpus.lexicon);
      c.Get("num_phonemes", &cfg.corpus.num_phonemes);
      c.Finish();
      cfg.corpus.manifest = Resolve(base_dir, cfg.corpus.manifest);
      cfg.corpus.splits = Resolve(base_dir, cfg.corpus.splits);
      cfg.corpus.grammar = Resolve(base_dir, cfg.corpus.grammar);
      cfg.corpus.lexicon = Resolve(base_dir, cfg.corpus.lexicon);
    } else {
      cfg.corpus.synthetic = SyntheticSpec();
    }
    if (r.Has("splits")) {
      ObjectReader s = r.Child("splits");
      s.Get("train", &cfg.split_ratios.train);
      s.Get("valid", &cfg.split_ratios.valid);
      s.Get("test", &cfg.split_ratios.test);
      s.Get("seed", &cfg.split_seed);
      s.Finish();
    }
    if (r.Has("mixture")) {
      ObjectReader m = r.Child("mixture");
      m.Get("seed", &cfg.mixture_seed);
      m.Get("gain", &cfg.mixture_gain);
      m.Finish();
    }
    if (r.Has("logmel")) {
      ObjectReader l = r.Child("logmel");
      l.Get("sample_rate", &cfg.logmel.sample_rate);
      l.Get("window_length", &cfg.logmel.window_length);
      l.Get("hop_length", &cfg.logmel.hop_length);
      l.Get("fft_size", &cfg.logmel.fft_size);
      l.Get("num_bins", &cfg.logmel.num_bins);
      l.Get("log_floor", &cfg.logmel.log_floor);
      l.Get("mel_low", &cfg.logmel.mel_low);
      l.Get("mel_high", &cfg.logmel.mel_high);
      l.Finish();
    }
    r.Get("context_radius", &cfg.context_radius);
    if (r.Has("architecture")) {
      ObjectReader a = r.Child("architecture");
      auto &t = cfg.architecture;
      a.Get("num_hidden_layers", &t.num_hidden_layers);
      a.Get("hidden_width", &t.hidden_width);
      a.Get("identity_embed_dim", &t.identity_embed_dim);
      a.Get("injection_layer", &t.injection_layer);
      a.Get("identity_dim", &t.identity_dim);
      a.Get("av_extra_layer", &t.av_extra_layer);
      a.Get("near_identity_noise", &t.near_identity_noise);
      a.Finish();
    }
    if (r.Has("train")) ReadTrain(r.Child("train"), &cfg.train);
    if (r.Has("adapt")) ReadTrain(r.Child("adapt"), &cfg.adapt);
    if (r.Has("decoder")) {
      ObjectReader d = r.Child("decoder");
      d.Get("use_priors", &cfg.decoder.use_priors);
      d.Get("self_loop_prob", &cfg.decoder.self_loop_prob);
      d.Finish();
    }
    std::vector<std::string> cells;
    r.Get("cells", &cells);
    for (const auto &c : cells) cfg.cells.push_back(ParseCell(c));
    r.Get("sd_speakers", &cfg.sd_speakers);
    r.Finish();
  } catch (const UsageError &e) {
    throw UsageError(source + ": " + e.what());
  }
  try {
    cfg.Validate();
  } catch (const UsageError &e) {
    throw UsageError(source + ": " + e.what());
  }
  return cfg;
}

ExperimentConfig LoadExperimentConfig(const std::string &path) {
  return ParseExperimentConfig(ReadFileBytes(path), path, DirName(path));
}

std::string FormatExperimentConfig(const ExperimentConfig &cfg) {
  Json j;
  j["seed"] = cfg.seed;
  Json corpus = Json::object();
  if (cfg.corpus.synthetic) {
    const SyntheticSpec &s = *cfg.corpus.synthetic;
    Json syn;
    syn["num_speakers"] = s.num_speakers;
    syn["num_phonemes"] = s.num_phonemes;
    syn["speaker_base_hz"] = s.BaseFrequencies();
    syn["speaker_spacing_hz"] = s.speaker_spacing_hz;
    syn["phoneme_offset_hz"] = s.PhonemeOffsets();
    syn["phoneme_spacing_hz"] = s.phoneme_spacing_hz;
    syn["min_frames_per_phoneme"] = s.min_frames_per_phoneme;
    syn["max_frames_per_phoneme"] = s.max_frames_per_phoneme;
    syn["utterances_per_speaker"] = s.utterances_per_speaker;
    syn["sample_rate"] = s.sample_rate;
    syn["hop_seconds"] = s.hop_seconds;
    syn["window_seconds"] = s.window_seconds;
    syn["amplitude_min"] = s.amplitude_min;
    syn["amplitude_max"] = s.amplitude_max;
    syn["noise_stddev"] = s.noise_stddev;
    syn["visual"] = s.visual;
    syn["video_fps"] = s.video_fps;
    syn["pixel_noise"] = s.pixel_noise;
    syn["seed"] = s.seed;
    corpus["synthetic"] = syn;
  }
  if (!cfg.corpus.manifest.empty()) corpus["manifest"] = cfg.corpus.manifest;
  if (!cfg.corpus.splits.empty()) corpus["splits"] = cfg.corpus.splits;
  if (!cfg.corpus.grammar.empty()) corpus["grammar"] = cfg.corpus.grammar;
  if (!cfg.corpus.lexicon.empty()) corpus["lexicon"] = cfg.corpus.lexicon;
  corpus["num_phonemes"] = cfg.corpus.num_phonemes;
  j["corpus"] = corpus;
  j["splits"] = {{"train", cfg.split_ratios.train},
                 {"valid", cfg.split_ratios.valid},
                 {"test", cfg.split_ratios.test},
                 {"seed", cfg.split_seed}};
  j["mixture"] = {{"seed", cfg.mixture_seed}, {"gain", cfg.mixture_gain}};
  const LogMelConfig &l = cfg.logmel;
  j["logmel"] = {{"sample_rate", l.sample_rate}, {"window_length", l.window_length},
                 {"hop_length", l.hop_length},   {"fft_size", l.fft_size},
                 {"num_bins", l.num_bins},       {"log_floor", l.log_floor},
                 {"mel_low", l.mel_low},         {"mel_high", l.mel_high}};
  j["context_radius"] = cfg.context_radius;
  const auto &a = cfg.architecture;
  j["architecture"] = {{"num_hidden_layers", a.num_hidden_layers},
                       {"hidden_width", a.hidden_width},
                       {"identity_embed_dim", a.identity_embed_dim},
                       {"injection_layer", a.injection_layer},
                       {"identity_dim", a.identity_dim},
                       {"av_extra_layer", a.av_extra_layer},
                       {"near_identity_noise", a.near_identity_noise}};
  j["train"] = TrainJson(cfg.train);
  j["adapt"] = TrainJson(cfg.adapt);
  j["decoder"] = {{"use_priors", cfg.decoder.use_priors},
                  {"self_loop_prob", cfg.decoder.self_loop_prob}};
  std::vector<std::string> cells;
  for (const Cell &c : cfg.ResolvedCells()) cells.push_back(c.Name());
  j["cells"] = cells;
  j["sd_speakers"] = cfg.sd_speakers;
  return j.dump(2) + "\n";
}

std::string ConfigHash(const ExperimentConfig &cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(Fnv1a64(FormatExperimentConfig(cfg))));
  return buf;
}

ExperimentConfig DefaultSyntheticExperiment() {
  ExperimentConfig cfg;
  cfg.corpus.synthetic = SyntheticSpec();
  return cfg;
}

}  // namespace avst

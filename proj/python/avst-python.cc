// python/avst-python.cc

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

// Python bindings: features, mixing, decoding, scoring, models and the
// experiment matrix.  Arrays cross as float64 numpy arrays, configs as JSON
// text in the same schema the CLI reads.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "avst/base/error.h"
#include "avst/corpus/mixing.h"
#include "avst/corpus/splits.h"
#include "avst/corpus/synthetic.h"
#include "avst/decoder/decode-graph.h"
#include "avst/decoder/grammar.h"
#include "avst/decoder/viterbi.h"
#include "avst/decoder/wer.h"
#include "avst/dsp/log-mel.h"
#include "avst/nnet/dnn.h"
#include "avst/nnet/model-io.h"
#include "avst/pipeline/corpus-data.h"
#include "avst/pipeline/experiment.h"
#include "avst/pipeline/training.h"

namespace py = pybind11;

namespace avst {
namespace {

ExperimentConfig ConfigFromText(const std::optional<std::string> &text) {
  if (!text) return DefaultSyntheticExperiment();
  return ParseExperimentConfig(*text, "<python>", std::filesystem::current_path().string());
}

LogMelConfig MakeLogMel(int sample_rate, int num_bins) {
  LogMelConfig cfg;
  cfg.sample_rate = sample_rate;
  cfg.num_bins = num_bins;
  cfg.Validate();
  return cfg;
}

Waveform MakeWave(const std::vector<double> &samples, int sample_rate) {
  Waveform w;
  w.samples = samples;
  w.sample_rate = sample_rate;
  return w;
}

Modality SiModality(const std::string &s) {
  const Modality m = ParseModality(s);
  if (m != Modality::kA && m != Modality::kAV) throw UsageError("modality must be a or av");
  return m;
}

struct Sets {
  PreparedSet train, valid;
};

Sets Prepare(const CorpusData &data, Condition condition, const ExperimentConfig &cfg) {
  Sets s;
  s.train = PrepareSet(data, data.splits.train, condition, cfg);
  if (!data.splits.valid.empty()) s.valid = PrepareSet(data, data.splits.valid, condition, cfg);
  return s;
}

DnnModel TrainSi(const std::optional<std::string> &config, const std::string &modality,
                 const std::string &condition) {
  const ExperimentConfig cfg = ConfigFromText(config);
  cfg.Validate();
  const CorpusData data = LoadCorpus(cfg);
  const Cell cell{ModelKind::kSI, SiModality(modality), ParseCondition(condition)};
  const Sets s = Prepare(data, cell.condition, cfg);
  return TrainSpeakerIndependent(cfg, data, s.train, s.valid, cell.modality, CellSeed(cfg, cell))
      .model;
}

DnnModel AdaptSt(const std::optional<std::string> &config, const DnnModel &si,
                 const std::string &variant, const std::string &condition) {
  const ExperimentConfig cfg = ConfigFromText(config);
  cfg.Validate();
  const CorpusData data = LoadCorpus(cfg);
  const std::string kind = "st-" + variant;
  const Cell cell{ParseModelKind(kind), si.spec.modality, ParseCondition(condition)};
  const Sets s = Prepare(data, cell.condition, cfg);
  return AdaptSpeakerTargeted(cfg, data, si, KindVariant(cell.kind), s.train, s.valid,
                              CellSeed(cfg, cell))
      .model;
}

DnnModel AdaptSd(const std::optional<std::string> &config, const DnnModel &si, int speaker,
                 const std::string &condition) {
  const ExperimentConfig cfg = ConfigFromText(config);
  cfg.Validate();
  const CorpusData data = LoadCorpus(cfg);
  const Cell cell{ModelKind::kSD, si.spec.modality, ParseCondition(condition)};
  const Sets s = Prepare(data, cell.condition, cfg);
  return AdaptSpeakerDependent(cfg, si, speaker, s.train, s.valid,
                               SpeakerSeed(CellSeed(cfg, cell), speaker))
      .model;
}

}  // namespace
}  // namespace avst

PYBIND11_MODULE(_core, m) {
  using namespace avst;
  m.doc() = "Audio-visual speaker-targeted recognition core";

  // Later registrations are tried first, so subclasses go after the base.
  auto &error = py::register_exception<Error>(m, "Error");
  py::register_exception<UsageError>(m, "UsageError", error.ptr());
  py::register_exception<DataError>(m, "DataError", error.ptr());
  py::register_exception<NumericError>(m, "NumericError", error.ptr());

  // Features and mixing.
  m.def(
      "log_mel",
      [](const std::vector<double> &samples, int sample_rate, int num_bins) {
        return ComputeLogMel(samples, MakeLogMel(sample_rate, num_bins));
      },
      py::arg("samples"), py::arg("sample_rate") = 16000, py::arg("num_bins") = 40,
      "Log mel filterbank energies, one row per 10 ms frame.");
  m.def("normalize_features", &NormalizeFeatures, py::arg("features"),
        "Per-utterance mean and variance normalization of each column.");
  m.def("stack_context", &StackContext, py::arg("features"), py::arg("radius") = 5,
        "Splices +-radius neighbouring frames, repeating the edge frames.");
  m.def(
      "acoustic_features",
      [](const std::vector<double> &samples, int sample_rate, int context_radius) {
        return AcousticFeatures(MakeWave(samples, sample_rate), MakeLogMel(sample_rate, 40),
                                context_radius);
      },
      py::arg("samples"), py::arg("sample_rate") = 16000, py::arg("context_radius") = 5,
      "Normalized and context-stacked log-mel features (440 columns by default).");
  m.def(
      "mix_waveforms",
      [](const std::vector<double> &target, const std::vector<double> &background,
         double gain, int sample_rate) {
        return MixWaveforms(MakeWave(target, sample_rate), MakeWave(background, sample_rate), gain)
            .samples;
      },
      py::arg("target"), py::arg("background"), py::arg("gain") = 0.5,
      py::arg("sample_rate") = 16000);

  // Scoring and decoding.
  py::class_<WerReport>(m, "WerReport")
      .def_readonly("substitutions", &WerReport::substitutions)
      .def_readonly("deletions", &WerReport::deletions)
      .def_readonly("insertions", &WerReport::insertions)
      .def_readonly("reference_words", &WerReport::reference_words)
      .def_property_readonly("errors", &WerReport::Errors)
      .def_property_readonly("wer", &WerReport::Wer)
      .def("__repr__", [](const WerReport &r) {
        return "WerReport(S=" + std::to_string(r.substitutions) + ", D=" +
               std::to_string(r.deletions) + ", I=" + std::to_string(r.insertions) +
               ", N=" + std::to_string(r.reference_words) + ")";
      });
  m.def("compute_wer", &ComputeWer, py::arg("reference"), py::arg("hypothesis"));

  m.def(
      "decode",
      [](const FeatureMatrix &posteriors, const std::string &grammar, const std::string &lexicon,
         double self_loop_prob, const std::optional<Eigen::VectorXd> &priors) {
        const DecodeGraph g = BuildGraph(ParseGrammar(grammar, "<grammar>"),
                                         ParseLexicon(lexicon, "<lexicon>"), self_loop_prob);
        const DecodeResult r = ViterbiDecode(posteriors, g, priors);
        return py::make_tuple(r.words, r.score);
      },
      py::arg("posteriors"), py::arg("grammar"), py::arg("lexicon"),
      py::arg("self_loop_prob") = 0.5, py::arg("priors") = std::nullopt,
      "Grammar-constrained Viterbi decoding; returns (words, score).");

  // Models.
  py::class_<DnnModel>(m, "Model")
      .def_property_readonly("description", [](const DnnModel &d) { return d.spec.Describe(); })
      .def_property_readonly("input_dim", [](const DnnModel &d) { return d.spec.BatchInputDim(); })
      .def_property_readonly("identity_dim",
                             [](const DnnModel &d) { return d.spec.BatchIdentityDim(); })
      .def_property_readonly("num_labels", [](const DnnModel &d) { return d.spec.output_labels; })
      .def_readonly("provenance", &DnnModel::provenance)
      .def(
          "predict",
          [](const DnnModel &d, const FeatureMatrix &input,
             const std::optional<FeatureMatrix> &identity) {
            Batch<float> b;
            b.input = input.cast<float>();
            b.identity = identity ? identity->cast<float>() : Mat<float>(input.rows(), 0);
            return PredictPosteriors(d, b);
          },
          py::arg("input"), py::arg("identity") = std::nullopt,
          "Frame posteriors; rows of `input` are frames.")
      .def("save", [](const DnnModel &d, const std::string &path) { SaveModel(path, d); });
  m.def(
      "init_model",
      [](const std::string &modality, int hidden_width, int num_hidden_layers, int labels,
         uint64_t seed) {
        ArchitectureSpec spec;
        spec.modality = SiModality(modality);
        spec.hidden_width = hidden_width;
        spec.num_hidden_layers = num_hidden_layers;
        spec.output_labels = labels;
        return InitModel<float>(spec, seed);
      },
      py::arg("modality") = "a", py::arg("hidden_width") = 64, py::arg("num_hidden_layers") = 4,
      py::arg("labels") = 6, py::arg("seed") = 1);
  m.def(
      "extend_for_identity",
      [](const DnnModel &si, const std::string &variant, int num_speakers, bool append_layer,
         uint64_t seed) {
        IdentityExtension ext;
        ext.variant = ParseVariant(variant);
        ext.num_speakers = num_speakers;
        ext.append_hidden_layer = append_layer;
        ext.seed = seed;
        return ExtendForIdentity(si, ext);
      },
      py::arg("model"), py::arg("variant"), py::arg("num_speakers"),
      py::arg("append_hidden_layer") = false, py::arg("seed") = 1);
  m.def("load_model", py::overload_cast<const std::string &>(&LoadModel), py::arg("path"));

  // Corpus, training and the experiment matrix.
  m.def("default_config", [] { return FormatExperimentConfig(DefaultSyntheticExperiment()); },
        "The built-in synthetic experiment as JSON text.");
  m.def(
      "synthesize",
      [](const std::string &out_dir, const std::optional<std::string> &config) {
        const ExperimentConfig cfg = ConfigFromText(config);
        if (!cfg.corpus.synthetic) throw UsageError("config has no corpus.synthetic section");
        const SyntheticCorpus corpus = SynthesizeCorpus(*cfg.corpus.synthetic);
        WriteSyntheticCorpus(corpus, out_dir);
        SaveSplits(out_dir + "/splits.json",
                   MakeSplits(corpus.manifest, cfg.split_ratios, cfg.split_seed));
        return static_cast<int>(corpus.manifest.entries.size());
      },
      py::arg("out_dir"), py::arg("config") = std::nullopt,
      "Writes the synthetic corpus and its splits; returns the utterance count.");
  m.def("train_si", &TrainSi, py::arg("config") = std::nullopt, py::arg("modality") = "a",
        py::arg("condition") = "two", py::call_guard<py::gil_scoped_release>());
  m.def("adapt_st", &AdaptSt, py::arg("config"), py::arg("model"), py::arg("variant"),
        py::arg("condition") = "two", py::call_guard<py::gil_scoped_release>());
  m.def("adapt_sd", &AdaptSd, py::arg("config"), py::arg("model"), py::arg("speaker"),
        py::arg("condition") = "two", py::call_guard<py::gil_scoped_release>());
  m.def(
      "run_matrix",
      [](const std::optional<std::string> &config, const std::optional<std::string> &out_dir,
         const std::optional<std::string> &cache_dir) {
        const ExperimentConfig cfg = ConfigFromText(config);
        cfg.Validate();
        RunOptions opts;
        if (cache_dir) opts.cache_dir = *cache_dir;
        ExperimentReport report;
        {
          py::gil_scoped_release release;
          report = RunMatrix(cfg, opts);
        }
        if (out_dir) WriteReport(*out_dir, report, cfg);
        return FormatReportJson(report);
      },
      py::arg("config") = std::nullopt, py::arg("out_dir") = std::nullopt,
      py::arg("cache_dir") = std::nullopt, "Runs the requested cells; returns the report JSON.");
}

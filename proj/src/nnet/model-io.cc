// src/nnet/model-io.cc

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

#include "avst/nnet/model-io.h"

#include <cstring>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"

namespace avst {

namespace {

constexpr char kModelMagic[4] = {'D', 'N', 'N', 'M'};
constexpr uint32_t kModelVersion = 1;

void WriteLayer(std::ostream &os, const DenseLayer<float> &layer) {
  WriteU32(os, static_cast<uint32_t>(layer.weight.rows()));
  WriteU32(os, static_cast<uint32_t>(layer.weight.cols()));
  os.write(reinterpret_cast<const char *>(layer.weight.data()),
           static_cast<std::streamsize>(sizeof(float) * layer.weight.size()));
  os.write(reinterpret_cast<const char *>(layer.bias.data()),
           static_cast<std::streamsize>(sizeof(float) * layer.bias.size()));
}

DenseLayer<float> ReadLayer(std::istream &is, int rows, int cols, const std::string &source) {
  const uint32_t r = ReadU32(is, "layer rows"), c = ReadU32(is, "layer cols");
  if (static_cast<int>(r) != rows || static_cast<int>(c) != cols)
    throw DataError(source + ": layer shape " + std::to_string(r) + "x" + std::to_string(c) +
                    " does not match the stored architecture (" + std::to_string(rows) + "x" +
                    std::to_string(cols) + ")");
  DenseLayer<float> layer;
  layer.weight.resize(rows, cols);
  layer.bias.resize(rows);
  const std::string w = ReadBytes(is, sizeof(float) * rows * static_cast<size_t>(cols), "weights");
  std::memcpy(layer.weight.data(), w.data(), w.size());
  const std::string b = ReadBytes(is, sizeof(float) * rows, "biases");
  std::memcpy(layer.bias.data(), b.data(), b.size());
  return layer;
}

}  // namespace

std::string SerializeModel(const DnnModel &model) {
  const ArchitectureSpec &s = model.spec;
  std::ostringstream os(std::ios::binary);
  os.write(kModelMagic, 4);
  WriteU32(os, kModelVersion);
  for (int v : {static_cast<int>(s.modality), static_cast<int>(s.variant), s.num_hidden_layers,
                s.hidden_width, s.output_labels, s.identity_embed_dim, s.injection_layer,
                s.acoustic_dim, s.visual_dim, s.identity_dim})
    WriteU32(os, static_cast<uint32_t>(v));
  const auto &p = model.params;
  WriteU32(os, static_cast<uint32_t>(p.hidden.size() + 1 + (p.embedding ? 1 : 0)));
  if (p.embedding) WriteLayer(os, *p.embedding);
  for (const auto &l : p.hidden) WriteLayer(os, l);
  WriteLayer(os, p.output);
  WriteU32(os, model.priors ? static_cast<uint32_t>(model.priors->size()) : 0u);
  if (model.priors)
    for (Eigen::Index k = 0; k < model.priors->size(); ++k)
      WriteF32(os, static_cast<float>((*model.priors)(k)));
  WriteU32(os, static_cast<uint32_t>(model.provenance.size()));
  WriteBytes(os, model.provenance);
  return os.str();
}

DnnModel DeserializeModel(const std::string &bytes, const std::string &source) {
  std::istringstream is(bytes, std::ios::binary);
  ExpectMagic(is, kModelMagic, source);
  const uint32_t version = ReadU32(is, "model version");
  if (version != kModelVersion)
    throw DataError(source + ": model version " + std::to_string(version) +
                    " is not supported (expected " + std::to_string(kModelVersion) + ")");
  DnnModel model;
  ArchitectureSpec &s = model.spec;
  const uint32_t modality = ReadU32(is, "modality"), variant = ReadU32(is, "variant");
  if (modality > 3 || variant > 3) throw DataError(source + ": corrupt architecture header");
  s.modality = static_cast<Modality>(modality);
  s.variant = static_cast<FusionVariant>(variant);
  int *fields[] = {&s.num_hidden_layers, &s.hidden_width,  &s.output_labels, &s.identity_embed_dim,
                   &s.injection_layer,   &s.acoustic_dim,  &s.visual_dim,    &s.identity_dim};
  for (int *f : fields) *f = static_cast<int>(ReadU32(is, "architecture field"));
  try {
    s.Validate();
  } catch (const UsageError &e) {
    throw DataError(source + ": stored architecture is invalid: " + e.what());
  }
  const bool has_embedding = s.variant == FusionVariant::kB;
  const uint32_t num_layers = ReadU32(is, "layer count");
  if (num_layers != static_cast<uint32_t>(s.num_hidden_layers + 1 + (has_embedding ? 1 : 0)))
    throw DataError(source + ": layer count does not match the stored architecture");
  if (has_embedding)
    model.params.embedding = ReadLayer(is, s.identity_embed_dim, s.identity_dim, source);
  for (int k = 0; k < s.num_hidden_layers; ++k)
    model.params.hidden.push_back(ReadLayer(is, s.hidden_width, s.HiddenInputDim(k), source));
  model.params.output = ReadLayer(is, s.output_labels, s.hidden_width, source);
  const uint32_t num_priors = ReadU32(is, "prior count");
  if (num_priors) {
    if (static_cast<int>(num_priors) != s.output_labels)
      throw DataError(source + ": prior vector length does not match output labels");
    Eigen::VectorXd priors(num_priors);
    for (uint32_t k = 0; k < num_priors; ++k) priors(k) = ReadF32(is, "priors");
    model.priors = std::move(priors);
  }
  const uint32_t plen = ReadU32(is, "provenance length");
  model.provenance = ReadBytes(is, plen, "provenance");
  if (is.peek() != std::char_traits<char>::eof())
    throw DataError(source + ": trailing bytes after model payload");
  return model;
}

void SaveModel(const std::string &path, const DnnModel &model) {
  WriteFileBytes(path, SerializeModel(model));
}

DnnModel LoadModel(const std::string &path) {
  return DeserializeModel(ReadFileBytes(path), path);
}

DnnModel LoadModel(const std::string &path, const ArchitectureSpec &expected) {
  DnnModel model = LoadModel(path);
  if (!(model.spec == expected))
    throw DataError(path + ": architecture mismatch: file has " + model.spec.Describe() +
                    ", expected " + expected.Describe());
  return model;
}

}  // namespace avst

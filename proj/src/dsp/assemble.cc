// src/dsp/assemble.cc

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

#include "avst/dsp/assemble.h"

#include <algorithm>
#include <cctype>

#include "avst/base/error.h"

namespace avst {

bool HasVisual(Modality m) { return m == Modality::kAV || m == Modality::kAVI; }
bool HasIdentity(Modality m) { return m == Modality::kAI || m == Modality::kAVI; }

Modality WithIdentity(Modality m) {
  return HasVisual(m) ? Modality::kAVI : Modality::kAI;
}

Modality WithoutIdentity(Modality m) {
  return HasVisual(m) ? Modality::kAV : Modality::kA;
}

std::string ModalityName(Modality m) {
  switch (m) {
    case Modality::kA: return "A";
    case Modality::kAV: return "AV";
    case Modality::kAI: return "AI";
    case Modality::kAVI: return "AVI";
  }
  return "?";
}

std::string VariantName(FusionVariant v) {
  switch (v) {
    case FusionVariant::kNone: return "none";
    case FusionVariant::kA: return "A";
    case FusionVariant::kB: return "B";
    case FusionVariant::kC: return "C";
  }
  return "?";
}

static std::string Upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::toupper(c); });
  return s;
}

Modality ParseModality(const std::string &s) {
  const std::string u = Upper(s);
  if (u == "A") return Modality::kA;
  if (u == "AV") return Modality::kAV;
  if (u == "AI") return Modality::kAI;
  if (u == "AVI") return Modality::kAVI;
  throw UsageError("unknown modality '" + s + "' (expected a, av, ai or avi)");
}

FusionVariant ParseVariant(const std::string &s) {
  const std::string u = Upper(s);
  if (u == "NONE") return FusionVariant::kNone;
  if (u == "A") return FusionVariant::kA;
  if (u == "B") return FusionVariant::kB;
  if (u == "C") return FusionVariant::kC;
  throw UsageError("unknown fusion variant '" + s + "' (expected a, b or c)");
}

void CheckModalityVariant(Modality m, FusionVariant v) {
  if ((v == FusionVariant::kNone) == HasIdentity(m))
    throw UsageError("modality " + ModalityName(m) + " is incompatible with variant " +
                     VariantName(v));
}

int AssembledInputDim(Modality m, FusionVariant v, int acoustic_dim,
                      int visual_dim, int identity_dim) {
  CheckModalityVariant(m, v);
  int dim = acoustic_dim;
  if (HasVisual(m)) dim += visual_dim;
  if (v == FusionVariant::kA) dim += identity_dim;
  return dim;
}

Eigen::VectorXd SpeakerOneHot(int speaker_id, int num_speakers) {
  if (num_speakers < 1) throw UsageError("num_speakers must be >= 1");
  if (speaker_id < 0 || speaker_id >= num_speakers)
    throw DataError("speaker id " + std::to_string(speaker_id) +
                    " out of range [0, " + std::to_string(num_speakers) + ")");
  Eigen::VectorXd z = Eigen::VectorXd::Zero(num_speakers);
  z(speaker_id) = 1.0;
  return z;
}

AssembledExample AssembleExample(Modality m, FusionVariant v,
                                 const Eigen::VectorXd &acoustic,
                                 const std::optional<Eigen::VectorXd> &visual,
                                 const std::optional<Eigen::VectorXd> &identity,
                                 int label) {
  CheckModalityVariant(m, v);
  if (visual.has_value() != HasVisual(m))
    throw DataError("modality " + ModalityName(m) +
                    (HasVisual(m) ? " requires" : " does not take") + " visual features");
  if (identity.has_value() != HasIdentity(m))
    throw DataError("modality " + ModalityName(m) +
                    (HasIdentity(m) ? " requires" : " does not take") +
                    " a speaker identity vector");

  AssembledExample ex;
  ex.modality = m;
  ex.variant = v;
  ex.label = label;
  const Eigen::Index vis = visual ? visual->size() : 0;
  const Eigen::Index inline_id = (v == FusionVariant::kA) ? identity->size() : 0;
  ex.input.resize(acoustic.size() + vis + inline_id);
  ex.input.head(acoustic.size()) = acoustic;
  if (vis) ex.input.segment(acoustic.size(), vis) = *visual;
  if (inline_id) ex.input.tail(inline_id) = *identity;
  if (identity && v != FusionVariant::kA) ex.identity = *identity;
  return ex;
}

}  // namespace avst

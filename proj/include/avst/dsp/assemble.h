// include/avst/dsp/assemble.h

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

#ifndef AVST_DSP_ASSEMBLE_H_
#define AVST_DSP_ASSEMBLE_H_

#include <optional>
#include <string>

#include <Eigen/Core>

namespace avst {

/// Input modality set: audio (A), audio-visual (AV), and the same two with a
/// speaker-identity input (AI, AVI).
enum class Modality { kA, kAV, kAI, kAVI };

/// How the identity vector enters the network.  kNone for models without an
/// identity input; kA concatenates it with the input features, kB maps it
/// through a learned linear embedding first, kC concatenates it with the
/// activations of a later hidden layer.
enum class FusionVariant { kNone, kA, kB, kC };

bool HasVisual(Modality m);
bool HasIdentity(Modality m);
/// Identity-bearing counterpart of an SI modality (A -> AI, AV -> AVI).
Modality WithIdentity(Modality m);
Modality WithoutIdentity(Modality m);

std::string ModalityName(Modality m);      // "A", "AV", "AI", "AVI"
std::string VariantName(FusionVariant v);  // "none", "A", "B", "C"
/// Case-insensitive; throws UsageError on unknown names.
Modality ParseModality(const std::string &s);
FusionVariant ParseVariant(const std::string &s);

/// Throws UsageError unless (variant == kNone) == !HasIdentity(modality).
void CheckModalityVariant(Modality m, FusionVariant v);

/// Dimension of the assembled input vector.  Identity columns are part of it
/// only for variant A; for B and C the identity vector travels separately.
int AssembledInputDim(Modality m, FusionVariant v, int acoustic_dim,
                      int visual_dim, int identity_dim);

struct AssembledExample {
  Eigen::VectorXd input;     // [x | w? | z?]
  Eigen::VectorXd identity;  // z for variants B and C, empty otherwise
  int label = -1;
  Modality modality = Modality::kA;
  FusionVariant variant = FusionVariant::kNone;
};

/// One-hot speaker vector.  Throws DataError if the id is out of range.
Eigen::VectorXd SpeakerOneHot(int speaker_id, int num_speakers);

/// Builds the network input for one frame.  `visual` must be present exactly
/// when the modality is visual, `identity` exactly when it carries identity.
AssembledExample AssembleExample(Modality m, FusionVariant v,
                                 const Eigen::VectorXd &acoustic,
                                 const std::optional<Eigen::VectorXd> &visual,
                                 const std::optional<Eigen::VectorXd> &identity,
                                 int label);

}  // namespace avst

#endif  // AVST_DSP_ASSEMBLE_H_

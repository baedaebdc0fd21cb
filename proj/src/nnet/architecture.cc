// src/nnet/architecture.cc

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

#include "avst/nnet/architecture.h"

#include <sstream>

#include "avst/base/error.h"

namespace avst {

void ArchitectureSpec::Validate() const {
  CheckModalityVariant(modality, variant);
  if (num_hidden_layers < 1) throw UsageError("architecture.num_hidden_layers must be >= 1");
  if (hidden_width < 1) throw UsageError("architecture.hidden_width must be >= 1");
  if (output_labels < 1) throw UsageError("architecture.output_labels must be >= 1");
  if (acoustic_dim < 1) throw UsageError("architecture.acoustic_dim must be >= 1");
  if (HasVisual(modality) && visual_dim < 1)
    throw UsageError("architecture.visual_dim must be >= 1");
  if (HasIdentity(modality) && identity_dim < 1)
    throw UsageError("architecture.identity_dim must be >= 1");
  if (variant == FusionVariant::kB && identity_embed_dim < 1)
    throw UsageError("architecture.identity_embed_dim must be >= 1");
  if (variant == FusionVariant::kC &&
      (injection_layer < 1 || injection_layer >= num_hidden_layers))
    throw UsageError("architecture.injection_layer must lie in [1, num_hidden_layers)");
}

int ArchitectureSpec::BatchInputDim() const {
  return AssembledInputDim(modality, variant, acoustic_dim, visual_dim, identity_dim);
}

int ArchitectureSpec::BatchIdentityDim() const {
  return (variant == FusionVariant::kB || variant == FusionVariant::kC) ? identity_dim : 0;
}

int ArchitectureSpec::InjectionTarget() const {
  return variant == FusionVariant::kC ? injection_layer : -1;
}

int ArchitectureSpec::HiddenInputDim(int index) const {
  if (index == 0) {
    int dim = BatchInputDim();
    if (variant == FusionVariant::kB) dim += identity_embed_dim;
    return dim;
  }
  return hidden_width + (index == InjectionTarget() ? identity_dim : 0);
}

std::string ArchitectureSpec::Describe() const {
  std::ostringstream os;
  os << "{modality=" << ModalityName(modality) << " variant=" << VariantName(variant)
     << " hidden=" << num_hidden_layers << "x" << hidden_width << " labels=" << output_labels
     << " acoustic=" << acoustic_dim;
  if (HasVisual(modality)) os << " visual=" << visual_dim;
  if (HasIdentity(modality)) os << " identity=" << identity_dim;
  if (variant == FusionVariant::kB) os << " embed=" << identity_embed_dim;
  if (variant == FusionVariant::kC) os << " inject=" << injection_layer;
  os << "}";
  return os.str();
}

}  // namespace avst

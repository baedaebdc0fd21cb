// include/avst/nnet/architecture.h

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

#ifndef AVST_NNET_ARCHITECTURE_H_
#define AVST_NNET_ARCHITECTURE_H_

#include <string>
#include <vector>

#include "avst/dsp/assemble.h"

namespace avst {

/// Topology of a feed-forward acoustic model.
///
/// Layer 1 sees the assembled input: acoustic features, visual features for
/// AV/AVI, and for identity models either the raw identity vector (variant A)
/// or its learned embedding (variant B).  Variant C instead appends the
/// identity vector to the output of hidden layer `injection_layer`, i.e. to
/// the input of hidden layer `injection_layer + 1` (1-based).
struct ArchitectureSpec {
  Modality modality = Modality::kA;
  FusionVariant variant = FusionVariant::kNone;
  int num_hidden_layers = 4;
  int hidden_width = 64;
  int output_labels = 6;
  int identity_embed_dim = 8;  // variant B
  int injection_layer = 1;     // variant C
  int acoustic_dim = 440;
  int visual_dim = 1800;
  int identity_dim = 34;

  /// Throws UsageError naming the offending field.
  void Validate() const;

  /// Width of the batch input matrix (AssembledInputDim).
  int BatchInputDim() const;
  /// Columns of the identity matrix a batch must carry (variants B and C).
  int BatchIdentityDim() const;
  /// Input width of hidden layer `index` (0-based) and of the output layer.
  int HiddenInputDim(int index) const;
  /// 0-based hidden layer whose input gets the identity vector (variant C),
  /// -1 otherwise.
  int InjectionTarget() const;

  std::string Describe() const;
  bool operator==(const ArchitectureSpec &) const = default;
};

}  // namespace avst

#endif  // AVST_NNET_ARCHITECTURE_H_

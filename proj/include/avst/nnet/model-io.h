// include/avst/nnet/model-io.h

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

#ifndef AVST_NNET_MODEL_IO_H_
#define AVST_NNET_MODEL_IO_H_

#include <string>

#include "avst/nnet/dnn.h"

namespace avst {

// Model file layout (all integers u32, all reals float32, little-endian):
//   "DNNM", version (1),
//   modality, variant, num_hidden_layers, hidden_width, output_labels,
//   identity_embed_dim, injection_layer, acoustic_dim, visual_dim, identity_dim,
//   num_layers, then per layer in declaration order (embedding, hidden...,
//   output): rows, cols, rows*cols column-major weights, rows biases,
//   num_priors + priors, provenance length + bytes.
std::string SerializeModel(const DnnModel &model);
DnnModel DeserializeModel(const std::string &bytes, const std::string &source);

void SaveModel(const std::string &path, const DnnModel &model);
/// Throws DataError on bad magic, unsupported version, truncation or
/// inconsistent layer shapes.
DnnModel LoadModel(const std::string &path);
/// As above, and additionally requires the stored architecture to equal
/// `expected`; the error names both.
DnnModel LoadModel(const std::string &path, const ArchitectureSpec &expected);

}  // namespace avst

#endif  // AVST_NNET_MODEL_IO_H_

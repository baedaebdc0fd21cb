// include/avst/dsp/feature-matrix.h

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

#ifndef AVST_DSP_FEATURE_MATRIX_H_
#define AVST_DSP_FEATURE_MATRIX_H_

#include <string>

#include <Eigen/Core>

namespace avst {

/// T x D per-frame features, row-major.  Log-mel, stacked context, pixel rows
/// and posteriors all use this type.
using FeatureMatrix =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Throws NumericError if any entry is NaN or infinite.
void CheckFinite(const FeatureMatrix &m, const std::string &what);

// FEAT file: "FEAT", u32 version (1), u32 rows, u32 cols, rows*cols float32
// little-endian, row-major.  Values are rounded to float32 on write, so
// read(write(m)) == m exactly whenever m holds float32-representable values,
// and write(read(f)) reproduces f byte for byte.
void WriteFeatureMatrix(const std::string &path, const FeatureMatrix &m);
FeatureMatrix ReadFeatureMatrix(const std::string &path);

std::string SerializeFeatureMatrix(const FeatureMatrix &m);
FeatureMatrix DeserializeFeatureMatrix(const std::string &bytes,
                                       const std::string &source);

}  // namespace avst

#endif  // AVST_DSP_FEATURE_MATRIX_H_

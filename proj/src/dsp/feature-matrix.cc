// src/dsp/feature-matrix.cc

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

#include "avst/dsp/feature-matrix.h"

#include <cmath>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"

namespace avst {

namespace {
constexpr char kFeatMagic[4] = {'F', 'E', 'A', 'T'};
constexpr uint32_t kFeatVersion = 1;
}  // namespace

void CheckFinite(const FeatureMatrix &m, const std::string &what) {
  if (!m.allFinite()) throw NumericError(what + ": non-finite values");
}

std::string SerializeFeatureMatrix(const FeatureMatrix &m) {
  std::ostringstream os(std::ios::binary);
  os.write(kFeatMagic, 4);
  WriteU32(os, kFeatVersion);
  WriteU32(os, static_cast<uint32_t>(m.rows()));
  WriteU32(os, static_cast<uint32_t>(m.cols()));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      WriteF32(os, static_cast<float>(m(r, c)));
  return os.str();
}

FeatureMatrix DeserializeFeatureMatrix(const std::string &bytes,
                                       const std::string &source) {
  std::istringstream is(bytes, std::ios::binary);
  ExpectMagic(is, kFeatMagic, source);
  const uint32_t version = ReadU32(is, "FEAT version");
  if (version != kFeatVersion)
    throw DataError(source + ": unsupported FEAT version " +
                    std::to_string(version));
  const uint32_t rows = ReadU32(is, "FEAT rows");
  const uint32_t cols = ReadU32(is, "FEAT cols");
  const uint64_t expected = 16 + 4ULL * rows * cols;
  if (bytes.size() < expected)
    throw DataError(source + ": truncated FEAT payload");
  if (bytes.size() > expected)
    throw DataError(source + ": trailing bytes after FEAT payload");
  FeatureMatrix m(rows, cols);
  for (uint32_t r = 0; r < rows; ++r)
    for (uint32_t c = 0; c < cols; ++c) m(r, c) = ReadF32(is, "FEAT data");
  return m;
}

void WriteFeatureMatrix(const std::string &path, const FeatureMatrix &m) {
  WriteFileBytes(path, SerializeFeatureMatrix(m));
}

FeatureMatrix ReadFeatureMatrix(const std::string &path) {
  return DeserializeFeatureMatrix(ReadFileBytes(path), path);
}

}  // namespace avst

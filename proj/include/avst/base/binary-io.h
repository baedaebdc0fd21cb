// include/avst/base/binary-io.h

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

#ifndef AVST_BASE_BINARY_IO_H_
#define AVST_BASE_BINARY_IO_H_

#include <cstdint>
#include <istream>
#include <ostream>
#include <string>

namespace avst {

// Little-endian fixed-width helpers shared by the FEAT, DNNM and ROI formats.
// Readers throw DataError("truncated ...") on short reads.

void WriteU32(std::ostream &os, uint32_t v);
void WriteF32(std::ostream &os, float v);
void WriteBytes(std::ostream &os, const std::string &bytes);

uint32_t ReadU32(std::istream &is, const char *what);
float ReadF32(std::istream &is, const char *what);
std::string ReadBytes(std::istream &is, size_t n, const char *what);

/// Reads exactly four bytes and compares them against `magic`.
void ExpectMagic(std::istream &is, const char magic[4], const std::string &source);

std::string ReadFileBytes(const std::string &path);
void WriteFileBytes(const std::string &path, const std::string &bytes);

}  // namespace avst

#endif  // AVST_BASE_BINARY_IO_H_

// src/base/binary-io.cc

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

#include "avst/base/binary-io.h"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "avst/base/error.h"

namespace avst {

static_assert(std::endian::native == std::endian::little,
              "binary formats assume a little-endian host");

void WriteU32(std::ostream &os, uint32_t v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

void WriteF32(std::ostream &os, float v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

void WriteBytes(std::ostream &os, const std::string &bytes) {
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

uint32_t ReadU32(std::istream &is, const char *what) {
  uint32_t v;
  if (!is.read(reinterpret_cast<char *>(&v), sizeof(v)))
    throw DataError(std::string("truncated input while reading ") + what);
  return v;
}

float ReadF32(std::istream &is, const char *what) {
  float v;
  if (!is.read(reinterpret_cast<char *>(&v), sizeof(v)))
    throw DataError(std::string("truncated input while reading ") + what);
  return v;
}

std::string ReadBytes(std::istream &is, size_t n, const char *what) {
  std::string s(n, '\0');
  if (n > 0 && !is.read(s.data(), static_cast<std::streamsize>(n)))
    throw DataError(std::string("truncated input while reading ") + what);
  return s;
}

void ExpectMagic(std::istream &is, const char magic[4], const std::string &source) {
  char got[4];
  if (!is.read(got, 4))
    throw DataError(source + ": truncated before magic bytes");
  if (std::memcmp(got, magic, 4) != 0)
    throw DataError(source + ": bad magic bytes, expected \"" +
                    std::string(magic, 4) + "\"");
}

std::string ReadFileBytes(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

void WriteFileBytes(const std::string &path, const std::string &bytes) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write " + path);
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!os) throw DataError("write failed: " + path);
}

}  // namespace avst

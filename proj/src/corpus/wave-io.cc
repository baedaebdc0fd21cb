// src/corpus/wave-io.cc

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

#include "avst/corpus/wave-io.h"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "avst/base/binary-io.h"
#include "avst/base/error.h"

namespace avst {

namespace {

int16_t ToPcm(double v) {
  const double s = std::round(v * 32768.0);
  return static_cast<int16_t>(std::clamp(s, -32768.0, 32767.0));
}

void WriteU16(std::ostream &os, uint16_t v) {
  os.write(reinterpret_cast<const char *>(&v), sizeof(v));
}

uint16_t GetU16(const std::string &b, size_t off) {
  uint16_t v;
  std::memcpy(&v, b.data() + off, 2);
  return v;
}

uint32_t GetU32(const std::string &b, size_t off) {
  uint32_t v;
  std::memcpy(&v, b.data() + off, 4);
  return v;
}

}  // namespace

void QuantizeTo16Bit(std::vector<double> *samples) {
  for (double &v : *samples) v = ToPcm(v) / 32768.0;
}

std::string EncodeWav(const Waveform &wave) {
  const uint32_t data_bytes = static_cast<uint32_t>(wave.samples.size() * 2);
  std::ostringstream os(std::ios::binary);
  os.write("RIFF", 4);
  WriteU32(os, 36 + data_bytes);
  os.write("WAVE", 4);
  os.write("fmt ", 4);
  WriteU32(os, 16);
  WriteU16(os, 1);  // PCM
  WriteU16(os, 1);  // mono
  WriteU32(os, static_cast<uint32_t>(wave.sample_rate));
  WriteU32(os, static_cast<uint32_t>(wave.sample_rate) * 2);
  WriteU16(os, 2);
  WriteU16(os, 16);
  os.write("data", 4);
  WriteU32(os, data_bytes);
  for (double v : wave.samples) {
    const int16_t s = ToPcm(v);
    os.write(reinterpret_cast<const char *>(&s), 2);
  }
  return os.str();
}

Waveform DecodeWav(const std::string &b, const std::string &source) {
  if (b.size() < 12 || b.compare(0, 4, "RIFF") != 0 || b.compare(8, 4, "WAVE") != 0)
    throw DataError(source + ": not a RIFF/WAVE file");
  Waveform wave;
  bool have_fmt = false;
  size_t off = 12;
  while (off + 8 <= b.size()) {
    const std::string id = b.substr(off, 4);
    const uint32_t size = GetU32(b, off + 4);
    const size_t body = off + 8;
    if (body + size > b.size()) throw DataError(source + ": truncated '" + id + "' chunk");
    if (id == "fmt ") {
      if (size < 16) throw DataError(source + ": short fmt chunk");
      const uint16_t format = GetU16(b, body), channels = GetU16(b, body + 2),
                     bits = GetU16(b, body + 14);
      if (format != 1 || channels != 1 || bits != 16)
        throw DataError(source + ": only mono 16-bit linear PCM is supported");
      wave.sample_rate = static_cast<int>(GetU32(b, body + 4));
      have_fmt = true;
    } else if (id == "data") {
      if (!have_fmt) throw DataError(source + ": data chunk before fmt chunk");
      const size_t n = size / 2;
      wave.samples.resize(n);
      for (size_t i = 0; i < n; ++i) {
        int16_t s;
        std::memcpy(&s, b.data() + body + 2 * i, 2);
        wave.samples[i] = s / 32768.0;
      }
      return wave;
    }
    off = body + size + (size & 1);
  }
  throw DataError(source + ": no data chunk");
}

Waveform ReadWav(const std::string &path) { return DecodeWav(ReadFileBytes(path), path); }

void WriteWav(const std::string &path, const Waveform &wave) {
  WriteFileBytes(path, EncodeWav(wave));
}

}  // namespace avst

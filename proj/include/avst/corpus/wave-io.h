// include/avst/corpus/wave-io.h

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

#ifndef AVST_CORPUS_WAVE_IO_H_
#define AVST_CORPUS_WAVE_IO_H_

#include <string>
#include <vector>

namespace avst {

/// Mono waveform, samples in [-1, 1].
struct Waveform {
  std::vector<double> samples;
  int sample_rate = 16000;
};

// RIFF/WAVE, mono, 16-bit signed little-endian linear PCM.  A file sample s
// maps to s / 32768; writing inverts that with rounding and clamping, so
// Write(Read(f)) reproduces f's samples exactly.
Waveform ReadWav(const std::string &path);
void WriteWav(const std::string &path, const Waveform &wave);
std::string EncodeWav(const Waveform &wave);
Waveform DecodeWav(const std::string &bytes, const std::string &source);

/// Rounds samples onto the 16-bit grid used by the file format.
void QuantizeTo16Bit(std::vector<double> *samples);

}  // namespace avst

#endif  // AVST_CORPUS_WAVE_IO_H_

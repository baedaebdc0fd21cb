// include/avst/base/random.h

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

#ifndef AVST_BASE_RANDOM_H_
#define AVST_BASE_RANDOM_H_

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace avst {

/// Mixes a 64-bit value (splitmix64 finalizer).  Used to derive independent
/// child seeds from a parent seed so every consumer of randomness gets its own
/// reproducible stream.
uint64_t MixSeed(uint64_t x);

/// Derives a child seed from a parent seed and a stream tag.
uint64_t DeriveSeed(uint64_t seed, std::string_view tag);
uint64_t DeriveSeed(uint64_t seed, uint64_t tag);

/// 64-bit FNV-1a over a byte string.
uint64_t Fnv1a64(std::string_view bytes);

using Rng = std::mt19937_64;

/// Uniform integer in [0, n).  Does not depend on the standard library's
/// distribution implementations, so draws are identical across toolchains.
uint64_t UniformIndex(Rng &rng, uint64_t n);

/// Uniform real in [0, 1) with 53 bits of randomness.
double UniformUnit(Rng &rng);

/// Standard normal deviate (Box-Muller, one value per call).
double StandardNormal(Rng &rng);

/// Fisher-Yates permutation of 0..n-1.
std::vector<int> RandomPermutation(Rng &rng, int n);

}  // namespace avst

#endif  // AVST_BASE_RANDOM_H_

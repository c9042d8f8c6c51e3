// Copyright (c) 2026 The Prosody TTS Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROSODY_COMMON_RNG_H_
#define PROSODY_COMMON_RNG_H_

#include <cstdint>
#include <random>

namespace prosody {

using Rng = std::mt19937_64;

// SplitMix64 finalizer; decorrelates (seed, index) pairs so that per-item
// streams can be generated in any order with identical results.
constexpr uint64_t MixSeed(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

constexpr uint64_t DeriveSeed(uint64_t seed, uint64_t index) {
  return MixSeed(MixSeed(seed) ^ MixSeed(index + 0x632be59bd9b4e019ULL));
}

inline Rng MakeRng(uint64_t seed, uint64_t index) {
  return Rng(DeriveSeed(seed, index));
}

// Uniform double in [0, 1) built from the raw 53 high bits. Unlike
// std::uniform_real_distribution this is identical across standard libraries.
inline double Uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

inline bool Bernoulli(Rng& rng, double p) { return Uniform01(rng) < p; }

// Integer uniform in [lo, hi] inclusive.
inline int UniformInt(Rng& rng, int lo, int hi) {
  const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
  return lo + static_cast<int>(rng() % span);
}

// Box-Muller standard normal.
double StandardNormal(Rng& rng);

}  // namespace prosody

#endif  // PROSODY_COMMON_RNG_H_

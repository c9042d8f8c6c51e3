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

#ifndef PROSODY_LINGDATA_MEL_H_
#define PROSODY_LINGDATA_MEL_H_

#include <cstdint>

#include "prosody/lingdata/duration.h"
#include "prosody/lingdata/inventory.h"
#include "prosody/nn/tensor.h"

namespace prosody::lingdata {

inline constexpr int kMelDims = 80;
inline constexpr float kMelMin = -4.0f;
inline constexpr float kMelMax = 4.0f;

struct MelNoise {
  double ramp = 0.1;
  double sigma = 0.05;

  static MelNoise Off() { return {0.1, 0.0}; }
};

// Fixed 80-dim signature per phoneme id. Linguistic phonemes draw U(-2, 2)
// per dim, SP / SIL sit near -3, PAD / MASK are zero.
class MelSignatures {
 public:
  static MelSignatures Build(const PhonemeInventory& inv, uint64_t seed);

  const nn::Matrix<float>& table() const { return table_; }
  auto Row(int id) const { return table_.row(id); }
  // Mean per-dim L1 distance over pairs of distinct linguistic phonemes.
  double MeanPairwiseL1(const PhonemeInventory& inv) const;

 private:
  nn::Matrix<float> table_;
};

struct MelSample {
  nn::Matrix<float> mel;  // (frames, 80)

  int frames() const { return static_cast<int>(mel.rows()); }
};

// Frame t of a d-frame phoneme: signature + ramp * sin(pi (t + 0.5) / d)
// + N(0, sigma^2), clamped to [-4, 4].
MelSample SynthMel(const DurationSample& sample, const MelSignatures& sig, uint64_t seed,
                   const MelNoise& noise = {});

}  // namespace prosody::lingdata

#endif  // PROSODY_LINGDATA_MEL_H_

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

#include "prosody/lingdata/mel.h"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "prosody/common/error.h"
#include "prosody/common/rng.h"

namespace prosody::lingdata {

MelSignatures MelSignatures::Build(const PhonemeInventory& inv, uint64_t seed) {
  MelSignatures sig;
  sig.table_ = nn::Matrix<float>::Zero(inv.size(), kMelDims);
  Rng rng(seed);
  for (int id = 0; id < inv.size(); ++id) {
    for (int d = 0; d < kMelDims; ++d) {
      const double u = Uniform01(rng);
      if (id == PhonemeInventory::kSp || id == PhonemeInventory::kSil) {
        sig.table_(id, d) = static_cast<float>(-3.0 + 0.2 * (u - 0.5));
      } else if (!inv.IsSpecial(id)) {
        sig.table_(id, d) = static_cast<float>(-2.0 + 4.0 * u);
      }
    }
  }
  return sig;
}

double MelSignatures::MeanPairwiseL1(const PhonemeInventory& inv) const {
  double total = 0;
  long pairs = 0;
  for (int a = PhonemeInventory::kNumSpecial; a < inv.size(); ++a) {
    for (int b = a + 1; b < inv.size(); ++b) {
      total += (table_.row(a) - table_.row(b)).cwiseAbs().mean();
      ++pairs;
    }
  }
  return pairs ? total / pairs : 0.0;
}

MelSample SynthMel(const DurationSample& sample, const MelSignatures& sig, uint64_t seed,
                   const MelNoise& noise) {
  if (!sample.has_durations()) Fail(ErrorCategory::kData, "synth_mel needs durations");
  Rng rng(seed);
  MelSample out;
  out.mel.resize(sample.TotalFrames(), kMelDims);
  int row = 0;
  for (size_t p = 0; p < sample.size(); ++p) {
    const int d = sample.durations[p];
    const auto base = sig.Row(sample.phoneme_ids[p]);
    for (int t = 0; t < d; ++t, ++row) {
      const float ramp =
          static_cast<float>(noise.ramp * std::sin(std::numbers::pi * (t + 0.5) / d));
      for (int k = 0; k < kMelDims; ++k) {
        float v = base(k) + ramp;
        if (noise.sigma > 0) v += static_cast<float>(noise.sigma * StandardNormal(rng));
        out.mel(row, k) = std::clamp(v, kMelMin, kMelMax);
      }
    }
  }
  return out;
}

}  // namespace prosody::lingdata

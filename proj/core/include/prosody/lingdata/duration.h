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

#ifndef PROSODY_LINGDATA_DURATION_H_
#define PROSODY_LINGDATA_DURATION_H_

#include <cstdint>
#include <string>
#include <vector>

#include "prosody/lingdata/corpus.h"
#include "prosody/lingdata/inventory.h"
#include "prosody/lingdata/lexicon.h"

namespace prosody::lingdata {

// Phoneme sequence with frame counts. char_spans has one entry per character
// plus one per SP / SIL token; durations is empty for a skeleton.
struct DurationSample {
  std::vector<int> phoneme_ids;
  std::vector<int> durations;
  std::vector<int> char_spans;

  size_t size() const { return phoneme_ids.size(); }
  bool has_durations() const { return !durations.empty(); }
  int TotalFrames() const;
  // Throws kData naming the first violated invariant.
  void Validate(int inventory_size) const;
  friend bool operator==(const DurationSample&, const DurationSample&) = default;
};

// Concatenates per-character readings; SP follows every character whose
// boundary is PPH or IPH except the last, SIL closes the utterance.
DurationSample ComposePhonemes(const std::vector<std::string>& readings,
                               const std::vector<Boundary>& boundaries,
                               const PhonemeInventory& inv);

DurationSample G2pGold(const AnnotatedSentence& s, const Lexicon& lex,
                       const PhonemeInventory& inv);

// Per-phoneme frame counts from the procedural duration model. `boundaries`
// are the per-character labels used to build the skeleton.
DurationSample SynthDurations(const DurationSample& skeleton,
                              const std::vector<Boundary>& boundaries,
                              const DurationParams& params, const PhonemeInventory& inv,
                              uint64_t seed);

// Sample i draws from DeriveSeed(seed, i). A dropped SP hands its frames to
// the preceding phoneme and loses its span entry.
std::vector<DurationSample> Corrupt(const std::vector<DurationSample>& data,
                                    const NoiseParams& noise, const PhonemeInventory& inv,
                                    uint64_t seed);

}  // namespace prosody::lingdata

#endif  // PROSODY_LINGDATA_DURATION_H_

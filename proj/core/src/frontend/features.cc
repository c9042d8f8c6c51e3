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

#include "prosody/frontend/features.h"

#include <numeric>

#include "prosody/lingdata/inventory.h"

namespace prosody::frontend {

std::vector<nn::Index> UpsampleIndex(const std::vector<int>& phoneme_ids,
                                     const std::vector<int>& char_spans) {
  const int total = std::accumulate(char_spans.begin(), char_spans.end(), 0);
  if (total != static_cast<int>(phoneme_ids.size())) {
    Fail(ErrorCategory::kShape, "char_spans sum " + std::to_string(total) +
                                    " != phoneme count " +
                                    std::to_string(phoneme_ids.size()));
  }
  std::vector<nn::Index> index;
  index.reserve(phoneme_ids.size());
  nn::Index ch = -1;
  size_t p = 0;
  for (int span : char_spans) {
    const int id = phoneme_ids[p];
    const bool pause = span == 1 && (id == lingdata::PhonemeInventory::kSp ||
                                     id == lingdata::PhonemeInventory::kSil);
    if (!pause) ++ch;
    if (ch < 0) Fail(ErrorCategory::kShape, "pause token before the first character");
    for (int k = 0; k < span; ++k, ++p) index.push_back(ch);
  }
  return index;
}

}  // namespace prosody::frontend

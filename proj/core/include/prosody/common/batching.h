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

#ifndef PROSODY_COMMON_BATCHING_H_
#define PROSODY_COMMON_BATCHING_H_

#include <algorithm>
#include <numeric>
#include <vector>

#include "prosody/common/error.h"
#include "prosody/common/rng.h"

namespace prosody {

// Draws mini-batches of indices from reshuffled epochs of [0, n).
class BatchSampler {
 public:
  BatchSampler(size_t n, size_t batch_size, uint64_t seed)
      : order_(n), batch_(std::min(batch_size, n)), rng_(seed) {
    if (n == 0) Fail(ErrorCategory::kData, "cannot sample batches from an empty set");
    if (batch_size == 0) Fail(ErrorCategory::kConfig, "batch size must be >= 1");
    std::iota(order_.begin(), order_.end(), size_t{0});
    Shuffle();
  }

  std::vector<size_t> Next() {
    if (pos_ + batch_ > order_.size()) {
      Shuffle();
      pos_ = 0;
    }
    std::vector<size_t> out(order_.begin() + pos_, order_.begin() + pos_ + batch_);
    pos_ += batch_;
    return out;
  }

 private:
  void Shuffle() {
    for (size_t i = order_.size(); i > 1; --i) std::swap(order_[i - 1], order_[rng_() % i]);
  }

  std::vector<size_t> order_;
  size_t batch_;
  size_t pos_ = 0;
  Rng rng_;
};

}  // namespace prosody

#endif  // PROSODY_COMMON_BATCHING_H_

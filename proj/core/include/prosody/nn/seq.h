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

#ifndef PROSODY_NN_SEQ_H_
#define PROSODY_NN_SEQ_H_

#include <numeric>
#include <string>
#include <vector>

#include "prosody/common/error.h"
#include "prosody/nn/tensor.h"

namespace prosody::nn {

// Packed variable-length batch: sequence b occupies rows
// [offset(b), offset(b) + length(b)) of every activation matrix. Packing
// replaces padding, so sequence-mixing ops (attention, convolution) never
// see positions from outside the sequence they are computing.
class SeqLayout {
 public:
  SeqLayout() = default;
  explicit SeqLayout(std::vector<Index> lengths) : lengths_(std::move(lengths)) {
    offsets_.resize(lengths_.size() + 1, 0);
    for (size_t b = 0; b < lengths_.size(); ++b) {
      if (lengths_[b] < 0) Fail(ErrorCategory::kShape, "negative sequence length");
      offsets_[b + 1] = offsets_[b] + lengths_[b];
    }
  }

  static SeqLayout Single(Index length) { return SeqLayout({length}); }

  size_t batch() const { return lengths_.size(); }
  Index length(size_t b) const { return lengths_[b]; }
  Index offset(size_t b) const { return offsets_[b]; }
  Index total() const { return offsets_.empty() ? 0 : offsets_.back(); }
  const std::vector<Index>& lengths() const { return lengths_; }

 private:
  std::vector<Index> lengths_;
  std::vector<Index> offsets_{0};
};

// Dense (B, T, C) batch with a (B, T) padding mask (true = padding).
template <typename S>
struct PaddedBatch {
  std::vector<Matrix<S>> items;           // each T x C
  std::vector<std::vector<bool>> padding;  // each length T
};

// Gathers the unpadded rows of every item into one packed matrix.
template <typename S>
std::pair<Matrix<S>, SeqLayout> Pack(const PaddedBatch<S>& batch) {
  if (batch.items.size() != batch.padding.size()) {
    Fail(ErrorCategory::kShape, "padding mask batch size mismatch");
  }
  std::vector<Index> lengths;
  Index cols = batch.items.empty() ? 0 : batch.items[0].cols();
  for (size_t b = 0; b < batch.items.size(); ++b) {
    if (static_cast<size_t>(batch.items[b].rows()) != batch.padding[b].size()) {
      Fail(ErrorCategory::kShape, "padding mask length mismatch at item " +
                                      std::to_string(b));
    }
    if (batch.items[b].cols() != cols) {
      Fail(ErrorCategory::kShape, "feature width mismatch inside batch");
    }
    Index n = 0;
    for (bool pad : batch.padding[b]) n += pad ? 0 : 1;
    lengths.push_back(n);
  }
  SeqLayout layout(lengths);
  Matrix<S> packed(layout.total(), cols);
  Index row = 0;
  for (size_t b = 0; b < batch.items.size(); ++b) {
    for (size_t t = 0; t < batch.padding[b].size(); ++t) {
      if (!batch.padding[b][t]) packed.row(row++) = batch.items[b].row(t);
    }
  }
  return {std::move(packed), std::move(layout)};
}

// Inverse of Pack; padded positions are filled with zeros.
template <typename S>
PaddedBatch<S> Unpack(const Matrix<S>& packed, const SeqLayout& layout,
                      const std::vector<std::vector<bool>>& padding) {
  PaddedBatch<S> out;
  out.padding = padding;
  Index row = 0;
  for (size_t b = 0; b < padding.size(); ++b) {
    Matrix<S> item = Matrix<S>::Zero(static_cast<Index>(padding[b].size()),
                                     packed.cols());
    for (size_t t = 0; t < padding[b].size(); ++t) {
      if (!padding[b][t]) item.row(t) = packed.row(row++);
    }
    out.items.push_back(std::move(item));
  }
  return out;
}

}  // namespace prosody::nn

#endif  // PROSODY_NN_SEQ_H_

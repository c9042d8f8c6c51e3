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

#ifndef PROSODY_FRONTEND_FEATURES_H_
#define PROSODY_FRONTEND_FEATURES_H_

#include <vector>

#include "prosody/nn/layers.h"

namespace prosody::frontend {

// Owning character of every phoneme: characters own their span, SP belongs
// to the character before it, SIL to the last character. Throws kShape
// when sum(char_spans) != len(phoneme_ids).
std::vector<nn::Index> UpsampleIndex(const std::vector<int>& phoneme_ids,
                                     const std::vector<int>& char_spans);

// [upsampled char embedding ; phoneme embedding] -> conv1d + ReLU -> out.
template <typename S>
class CombineLayer {
 public:
  CombineLayer() = default;
  CombineLayer(nn::Index char_hidden, nn::Index phone_hidden, nn::Index out, int kernel,
               Rng& rng)
      : char_hidden_(char_hidden), conv_(char_hidden + phone_hidden, out, kernel, rng) {}

  // char_emb: (sum chars, char_hidden); phone_emb: (sum phonemes, phone
  // hidden); index: packed char row per packed phoneme row.
  nn::Tensor<S> Forward(const nn::Tensor<S>& char_emb, const nn::Tensor<S>& phone_emb,
                        const std::vector<nn::Index>& index,
                        const nn::SeqLayout& phone_layout) const {
    if (char_emb.cols() != char_hidden_) {
      Fail(ErrorCategory::kShape, "combine layer expects char width " +
                                      std::to_string(char_hidden_) + ", got " +
                                      std::to_string(char_emb.cols()));
    }
    const nn::Tensor<S> up = nn::GatherRows(char_emb, index);
    return nn::Relu(conv_.Forward(nn::ConcatCols(up, phone_emb), phone_layout));
  }

  void Collect(const std::string& prefix, nn::ParamList<S>& out) const {
    conv_.Collect(prefix, out);
  }

  nn::Conv1dLayer<S>& conv() { return conv_; }
  nn::Index char_hidden() const { return char_hidden_; }

 private:
  nn::Index char_hidden_ = 0;
  nn::Conv1dLayer<S> conv_;
};

}  // namespace prosody::frontend

#endif  // PROSODY_FRONTEND_FEATURES_H_

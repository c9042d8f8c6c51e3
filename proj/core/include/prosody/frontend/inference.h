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

#ifndef PROSODY_FRONTEND_INFERENCE_H_
#define PROSODY_FRONTEND_INFERENCE_H_

#include <string>
#include <vector>

#include "prosody/frontend/char_encoder.h"
#include "prosody/frontend/features.h"
#include "prosody/lingdata/corpus.h"
#include "prosody/lingdata/duration.h"
#include "prosody/lingdata/inventory.h"
#include "prosody/lingdata/lexicon.h"

namespace prosody::frontend {

// Row-wise argmax, ties to the lowest label id.
std::vector<int> ArgmaxRows(const nn::Matrix<float>& scores);

// Per-character labels of `task` for each sentence (read-only on `enc`).
std::vector<std::vector<int>> PredictTags(const CharEncoder<float>& enc,
                                          const std::vector<std::vector<int>>& char_ids,
                                          Task task);
std::vector<int> PredictTags(const CharEncoder<float>& enc, const std::vector<int>& char_ids,
                             Task task);

// Index into `candidates` maximizing probs renormalized over the candidate
// labels only; ties to the first candidate.
int MaskedArgmax(const nn::RowVector<float>& probs, const std::vector<int>& candidates);

struct G2pResult {
  lingdata::DurationSample skeleton;      // phoneme_ids + char_spans
  std::vector<int> pinyin;                // candidate index per char
  std::vector<lingdata::Boundary> prosody;  // labels that drove SP insertion
};

// Monophones take their sole reading, polyphones the masked-argmax of the
// polyphone head. SP insertion follows `gold_prosody` when given, the
// prosody head otherwise.
G2pResult G2p(const CharEncoder<float>& enc, const CharVocab& vocab,
              const std::vector<std::string>& chars, const lingdata::Lexicon& lex,
              const lingdata::PhonemeInventory& inv,
              const std::vector<lingdata::Boundary>* gold_prosody = nullptr);

// Final-layer hidden states, (num_chars, hidden), inference mode.
nn::Matrix<float> CharEmbeddings(const CharEncoder<float>& enc,
                                 const std::vector<int>& char_ids);

struct FrontendOutput {
  std::vector<int> phoneme_ids;
  std::vector<int> char_spans;
  nn::Matrix<float> char_embeddings;  // (num_chars, char hidden)
  nn::Matrix<float> combined;         // (num_phonemes, combine width)
};

FrontendOutput FrontFeatures(const CharEncoder<float>& enc, const CharVocab& vocab,
                             const std::vector<std::string>& chars,
                             const std::vector<int>& phoneme_ids,
                             const std::vector<int>& char_spans,
                             const nn::Embedding<float>& phoneme_table,
                             const CombineLayer<float>& combine);

}  // namespace prosody::frontend

#endif  // PROSODY_FRONTEND_INFERENCE_H_

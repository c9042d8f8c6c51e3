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

#include "prosody/frontend/inference.h"

#include "prosody/common/error.h"
#include "prosody/nn/loss.h"

namespace prosody::frontend {

namespace {

nn::Tensor<float> EncodeBatch(const CharEncoder<float>& enc,
                              const std::vector<std::vector<int>>& char_ids,
                              std::vector<nn::Index>& lengths) {
  std::vector<int> ids;
  for (const auto& s : char_ids) {
    ids.insert(ids.end(), s.begin(), s.end());
    lengths.push_back(static_cast<nn::Index>(s.size()));
  }
  return enc.Encode(ids, nn::SeqLayout(lengths), {});
}

}  // namespace

std::vector<int> ArgmaxRows(const nn::Matrix<float>& scores) {
  std::vector<int> out(scores.rows(), 0);
  for (nn::Index r = 0; r < scores.rows(); ++r) {
    for (nn::Index c = 1; c < scores.cols(); ++c) {
      if (scores(r, c) > scores(r, out[r])) out[r] = static_cast<int>(c);
    }
  }
  return out;
}

std::vector<std::vector<int>> PredictTags(const CharEncoder<float>& enc,
                                          const std::vector<std::vector<int>>& char_ids,
                                          Task task) {
  if (!enc.HasHead(task)) {
    Fail(ErrorCategory::kInvalidArgument,
         "encoder has no " + std::string(TaskName(task)) + " head");
  }
  nn::NoGradGuard no_grad;
  std::vector<std::vector<int>> out;
  constexpr size_t kChunk = 64;
  for (size_t begin = 0; begin < char_ids.size(); begin += kChunk) {
    const std::vector<std::vector<int>> part(
        char_ids.begin() + begin, char_ids.begin() + std::min(char_ids.size(), begin + kChunk));
    std::vector<nn::Index> lengths;
    const auto hidden = EncodeBatch(enc, part, lengths);
    // Softmax is monotone, so the argmax of W h equals that of softmax(W h).
    const auto labels = ArgmaxRows(enc.HeadLogits(hidden, task).value());
    size_t pos = 0;
    for (nn::Index len : lengths) {
      out.emplace_back(labels.begin() + pos, labels.begin() + pos + len);
      pos += len;
    }
  }
  return out;
}

std::vector<int> PredictTags(const CharEncoder<float>& enc, const std::vector<int>& char_ids,
                             Task task) {
  return PredictTags(enc, std::vector<std::vector<int>>{char_ids}, task).front();
}

int MaskedArgmax(const nn::RowVector<float>& probs, const std::vector<int>& candidates) {
  if (candidates.empty()) Fail(ErrorCategory::kData, "empty candidate set");
  double norm = 0;
  for (int c : candidates) norm += probs(c);
  int best = 0;
  double best_p = -1;
  for (size_t k = 0; k < candidates.size(); ++k) {
    const double p = norm > 0 ? probs(candidates[k]) / norm : 0.0;
    if (p > best_p) {
      best_p = p;
      best = static_cast<int>(k);
    }
  }
  return best;
}

G2pResult G2p(const CharEncoder<float>& enc, const CharVocab& vocab,
              const std::vector<std::string>& chars, const lingdata::Lexicon& lex,
              const lingdata::PhonemeInventory& inv,
              const std::vector<lingdata::Boundary>* gold_prosody) {
  if (chars.empty()) Fail(ErrorCategory::kInvalidArgument, "g2p input is empty");
  bool any_polyphone = false;
  for (size_t i = 0; i < chars.size(); ++i) {
    if (!lex.Contains(chars[i])) {
      Fail(ErrorCategory::kData, "unknown character '" + chars[i] + "' at position " +
                                     std::to_string(i));
    }
    if (lex.Candidates(chars[i]).empty()) {
      Fail(ErrorCategory::kData, "empty candidate set for '" + chars[i] + "'");
    }
    any_polyphone = any_polyphone || lex.IsPolyphone(chars[i]);
  }
  G2pResult out;
  nn::Matrix<float> poly_probs;
  std::vector<int> predicted_prosody;
  if (any_polyphone || gold_prosody == nullptr) {
    nn::NoGradGuard no_grad;
    const auto ids = vocab.Encode(chars);
    const auto hidden =
        enc.Encode(ids, nn::SeqLayout::Single(static_cast<nn::Index>(ids.size())), {});
    if (any_polyphone) {
      poly_probs = nn::SoftmaxRowsValue<float>(enc.HeadLogits(hidden, Task::kPolyphone).value());
    }
    if (gold_prosody == nullptr) {
      predicted_prosody = ArgmaxRows(enc.HeadLogits(hidden, Task::kProsody).value());
    }
  }
  std::vector<std::string> readings;
  for (size_t i = 0; i < chars.size(); ++i) {
    const auto& cands = lex.Candidates(chars[i]);
    int pick = 0;
    if (cands.size() > 1) {
      std::vector<int> labels;
      for (const auto& r : cands) labels.push_back(lex.PolyphoneLabel(r));
      pick = MaskedArgmax(poly_probs.row(static_cast<nn::Index>(i)), labels);
    }
    out.pinyin.push_back(pick);
    readings.push_back(cands[pick]);
  }
  if (gold_prosody) {
    if (gold_prosody->size() != chars.size()) {
      Fail(ErrorCategory::kShape, "gold prosody length does not match the sentence");
    }
    out.prosody = *gold_prosody;
  } else {
    for (int b : predicted_prosody) out.prosody.push_back(static_cast<lingdata::Boundary>(b));
  }
  out.skeleton = lingdata::ComposePhonemes(readings, out.prosody, inv);
  return out;
}

nn::Matrix<float> CharEmbeddings(const CharEncoder<float>& enc,
                                 const std::vector<int>& char_ids) {
  nn::NoGradGuard no_grad;
  return enc.Encode(char_ids, nn::SeqLayout::Single(static_cast<nn::Index>(char_ids.size())), {})
      .value();
}

FrontendOutput FrontFeatures(const CharEncoder<float>& enc, const CharVocab& vocab,
                             const std::vector<std::string>& chars,
                             const std::vector<int>& phoneme_ids,
                             const std::vector<int>& char_spans,
                             const nn::Embedding<float>& phoneme_table,
                             const CombineLayer<float>& combine) {
  nn::NoGradGuard no_grad;
  const auto index = UpsampleIndex(phoneme_ids, char_spans);
  if (!index.empty() && index.back() + 1 != static_cast<nn::Index>(chars.size())) {
    Fail(ErrorCategory::kShape, "char_spans cover " + std::to_string(index.back() + 1) +
                                    " characters, sentence has " +
                                    std::to_string(chars.size()));
  }
  FrontendOutput out;
  out.phoneme_ids = phoneme_ids;
  out.char_spans = char_spans;
  out.char_embeddings = CharEmbeddings(enc, vocab.Encode(chars));
  const nn::Tensor<float> combined = combine.Forward(
      nn::Tensor<float>(out.char_embeddings), phoneme_table.Forward(phoneme_ids), index,
      nn::SeqLayout::Single(static_cast<nn::Index>(phoneme_ids.size())));
  out.combined = combined.value();
  return out;
}

}  // namespace prosody::frontend

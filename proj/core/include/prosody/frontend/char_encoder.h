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

#ifndef PROSODY_FRONTEND_CHAR_ENCODER_H_
#define PROSODY_FRONTEND_CHAR_ENCODER_H_

#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prosody/frontend/vocab.h"
#include "prosody/nn/layers.h"

namespace prosody::frontend {

enum class Task { kPolyphone, kSegPos, kProsody };
inline constexpr Task kAllTasks[] = {Task::kPolyphone, Task::kSegPos, Task::kProsody};

std::string_view TaskName(Task t);  // "polyphone", "seg_pos", "prosody"
Task ParseTask(std::string_view name);
std::set<Task> ParseTasks(const std::string& comma_list);
std::string JoinTasks(const std::set<Task>& tasks);

struct CharEncoderConfig {
  int vocab_size = 0;
  int hidden = 128;
  int blocks = 4;
  int heads = 2;
  int conv_filter = 512;
  int conv_kernel = 1;
  double dropout = 0.1;
  int polyphone_labels = 0;  // global reading label space
  int seg_pos_labels = 16;
  int prosody_labels = 4;
  std::set<Task> tasks;  // heads present

  int NumLabels(Task t) const;
  nn::FFTBlockConfig BlockConfig() const;
  void Validate() const;
};

// Transformer character encoder with an MLM head and optional per-task
// softmax heads p(c|h) = softmax(W h). All heads read the final hidden
// states.
template <typename S>
class CharEncoder {
 public:
  CharEncoder() = default;
  CharEncoder(const CharEncoderConfig& cfg, Rng& rng);

  // Packed ids -> (total, hidden).
  nn::Tensor<S> Encode(const std::vector<int>& ids, const nn::SeqLayout& layout,
                       const nn::ForwardContext& ctx) const;
  nn::Tensor<S> MlmLogits(const nn::Tensor<S>& hidden) const;
  // W h for the task head; throws kInvalidArgument when the head is absent.
  nn::Tensor<S> HeadLogits(const nn::Tensor<S>& hidden, Task task) const;
  bool HasHead(Task t) const { return cfg_.tasks.count(t) > 0; }

  // Adds heads for `tasks` that are not yet present, Xavier-initialized.
  void AddHeads(const std::set<Task>& tasks, Rng& rng);
  nn::Tensor<S>& head_weight(Task t);

  nn::ParamList<S> Params() const;
  const CharEncoderConfig& config() const { return cfg_; }

 private:
  CharEncoderConfig cfg_;
  nn::Embedding<S> embedding_;
  nn::FFTStack<S> encoder_;
  nn::Linear<S> mlm_;
  nn::Tensor<S> heads_[3];
};

extern template class CharEncoder<float>;
extern template class CharEncoder<double>;

// Checkpoint directory: params.bin + manifest.txt (config and active heads
// as tags) + vocab.txt.
void SaveCharEncoder(const std::filesystem::path& dir, const CharEncoder<float>& enc,
                     const CharVocab& vocab);
struct LoadedCharEncoder {
  CharEncoder<float> encoder;
  CharVocab vocab;
};
LoadedCharEncoder LoadCharEncoder(const std::filesystem::path& dir);

}  // namespace prosody::frontend

#endif  // PROSODY_FRONTEND_CHAR_ENCODER_H_

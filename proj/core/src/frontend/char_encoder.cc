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

#include "prosody/frontend/char_encoder.h"

#include <cmath>
#include <sstream>

#include "prosody/common/error.h"

namespace prosody::frontend {

namespace {

size_t Slot(Task t) { return static_cast<size_t>(t); }

int TagInt(const nn::Checkpoint& ckpt, const std::string& key) {
  auto it = ckpt.tags.find(key);
  if (it == ckpt.tags.end()) {
    Fail(ErrorCategory::kData, "checkpoint manifest lacks tag '" + key + "'");
  }
  return std::stoi(it->second);
}

}  // namespace

std::string_view TaskName(Task t) {
  switch (t) {
    case Task::kPolyphone:
      return "polyphone";
    case Task::kSegPos:
      return "seg_pos";
    case Task::kProsody:
      return "prosody";
  }
  return "?";
}

Task ParseTask(std::string_view name) {
  for (Task t : kAllTasks) {
    if (TaskName(t) == name) return t;
  }
  Fail(ErrorCategory::kConfig, "unknown task '" + std::string(name) + "'");
}

std::set<Task> ParseTasks(const std::string& comma_list) {
  std::set<Task> out;
  std::istringstream ss(comma_list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(ParseTask(item));
  }
  return out;
}

std::string JoinTasks(const std::set<Task>& tasks) {
  std::string out;
  for (Task t : tasks) {
    if (!out.empty()) out += ",";
    out += TaskName(t);
  }
  return out;
}

int CharEncoderConfig::NumLabels(Task t) const {
  switch (t) {
    case Task::kPolyphone:
      return polyphone_labels;
    case Task::kSegPos:
      return seg_pos_labels;
    case Task::kProsody:
      return prosody_labels;
  }
  return 0;
}

nn::FFTBlockConfig CharEncoderConfig::BlockConfig() const {
  return {hidden, heads, conv_filter, conv_kernel, dropout};
}

void CharEncoderConfig::Validate() const {
  if (vocab_size <= CharVocab::kNumSpecial) {
    Fail(ErrorCategory::kConfig, "encoder.vocab_size must exceed the special tokens");
  }
  if (blocks < 1) Fail(ErrorCategory::kConfig, "encoder.blocks must be >= 1");
  BlockConfig().Validate();
  for (Task t : tasks) {
    if (NumLabels(t) < 2) {
      Fail(ErrorCategory::kConfig, "task " + std::string(TaskName(t)) +
                                       " needs at least 2 labels");
    }
  }
}

template <typename S>
CharEncoder<S>::CharEncoder(const CharEncoderConfig& cfg, Rng& rng) : cfg_(cfg) {
  cfg_.Validate();
  embedding_ = nn::Embedding<S>(cfg.vocab_size, cfg.hidden, rng);
  encoder_ = nn::FFTStack<S>(cfg.blocks, cfg.BlockConfig(), rng);
  mlm_ = nn::Linear<S>(cfg.hidden, cfg.vocab_size, true, rng);
  const std::set<Task> tasks = cfg_.tasks;
  cfg_.tasks.clear();
  AddHeads(tasks, rng);
}

template <typename S>
void CharEncoder<S>::AddHeads(const std::set<Task>& tasks, Rng& rng) {
  for (Task t : tasks) {
    if (HasHead(t)) continue;
    const int c = cfg_.NumLabels(t);
    if (c < 2) {
      Fail(ErrorCategory::kConfig, "task " + std::string(TaskName(t)) +
                                       " needs at least 2 labels");
    }
    heads_[Slot(t)] =
        nn::Tensor<S>(nn::XavierUniform<S>(cfg_.hidden, c, cfg_.hidden, c, rng), true);
    cfg_.tasks.insert(t);
  }
}

template <typename S>
nn::Tensor<S>& CharEncoder<S>::head_weight(Task t) {
  if (!HasHead(t)) {
    Fail(ErrorCategory::kInvalidArgument,
         "encoder has no " + std::string(TaskName(t)) + " head");
  }
  return heads_[Slot(t)];
}

template <typename S>
nn::Tensor<S> CharEncoder<S>::Encode(const std::vector<int>& ids, const nn::SeqLayout& layout,
                                     const nn::ForwardContext& ctx) const {
  if (static_cast<nn::Index>(ids.size()) != layout.total()) {
    Fail(ErrorCategory::kShape, "char id count does not match layout");
  }
  for (int id : ids) {
    if (id < 0 || id >= cfg_.vocab_size) {
      Fail(ErrorCategory::kData, "char id " + std::to_string(id) + " outside embedding table");
    }
  }
  nn::Tensor<S> x =
      nn::Scale(embedding_.Forward(ids), static_cast<S>(std::sqrt(double(cfg_.hidden))));
  x = nn::Dropout(x, cfg_.dropout, ctx.dropout_rng());
  return encoder_.Forward(x, layout, ctx);
}

template <typename S>
nn::Tensor<S> CharEncoder<S>::MlmLogits(const nn::Tensor<S>& hidden) const {
  return mlm_.Forward(hidden);
}

template <typename S>
nn::Tensor<S> CharEncoder<S>::HeadLogits(const nn::Tensor<S>& hidden, Task task) const {
  if (!HasHead(task)) {
    Fail(ErrorCategory::kInvalidArgument,
         "encoder has no " + std::string(TaskName(task)) + " head");
  }
  return nn::MatMul(hidden, heads_[Slot(task)]);
}

template <typename S>
nn::ParamList<S> CharEncoder<S>::Params() const {
  nn::ParamList<S> out;
  embedding_.Collect("embedding", out);
  encoder_.Collect("encoder", out);
  mlm_.Collect("mlm", out);
  for (Task t : cfg_.tasks) {
    out.Add("head." + std::string(TaskName(t)) + ".weight", heads_[Slot(t)]);
  }
  return out;
}

template class CharEncoder<float>;
template class CharEncoder<double>;

void SaveCharEncoder(const std::filesystem::path& dir, const CharEncoder<float>& enc,
                     const CharVocab& vocab) {
  const auto& c = enc.config();
  std::map<std::string, std::string> tags = {
      {"model", "char_encoder"},
      {"vocab_size", std::to_string(c.vocab_size)},
      {"hidden", std::to_string(c.hidden)},
      {"blocks", std::to_string(c.blocks)},
      {"heads", std::to_string(c.heads)},
      {"conv_filter", std::to_string(c.conv_filter)},
      {"conv_kernel", std::to_string(c.conv_kernel)},
      {"polyphone_labels", std::to_string(c.polyphone_labels)},
      {"seg_pos_labels", std::to_string(c.seg_pos_labels)},
      {"prosody_labels", std::to_string(c.prosody_labels)},
      {"active_heads", c.tasks.empty() ? "none" : JoinTasks(c.tasks)},
  };
  nn::ToCheckpoint(enc.Params(), tags).Save(dir);
  vocab.Save(dir / "vocab.txt");
}

LoadedCharEncoder LoadCharEncoder(const std::filesystem::path& dir) {
  const nn::Checkpoint ckpt = nn::Checkpoint::Load(dir);
  if (ckpt.tags.count("model") == 0 || ckpt.tags.at("model") != "char_encoder") {
    Fail(ErrorCategory::kData, dir.string() + " is not a character encoder checkpoint");
  }
  CharEncoderConfig cfg;
  cfg.vocab_size = TagInt(ckpt, "vocab_size");
  cfg.hidden = TagInt(ckpt, "hidden");
  cfg.blocks = TagInt(ckpt, "blocks");
  cfg.heads = TagInt(ckpt, "heads");
  cfg.conv_filter = TagInt(ckpt, "conv_filter");
  cfg.conv_kernel = TagInt(ckpt, "conv_kernel");
  cfg.polyphone_labels = TagInt(ckpt, "polyphone_labels");
  cfg.seg_pos_labels = TagInt(ckpt, "seg_pos_labels");
  cfg.prosody_labels = TagInt(ckpt, "prosody_labels");
  const std::string heads = ckpt.tags.at("active_heads");
  if (heads != "none") cfg.tasks = ParseTasks(heads);
  Rng rng(0);
  LoadedCharEncoder out{CharEncoder<float>(cfg, rng), CharVocab::Load(dir / "vocab.txt")};
  auto params = out.encoder.Params();
  nn::LoadParams(ckpt, params);
  if (out.vocab.size() != cfg.vocab_size) {
    Fail(ErrorCategory::kData, "vocab.txt size does not match the embedding table");
  }
  return out;
}

}  // namespace prosody::frontend

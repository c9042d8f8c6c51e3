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

#include "prosody/frontend/vocab.h"

#include <algorithm>
#include <fstream>

#include "prosody/common/error.h"

namespace prosody::frontend {

CharVocab::CharVocab(std::vector<std::string> chars) {
  std::sort(chars.begin(), chars.end());
  chars.erase(std::unique(chars.begin(), chars.end()), chars.end());
  symbols_ = {"<pad>", "<mask>"};
  symbols_.insert(symbols_.end(), chars.begin(), chars.end());
  for (int i = 0; i < size(); ++i) index_[symbols_[i]] = i;
}

int CharVocab::Id(const std::string& ch, long position) const {
  auto it = index_.find(ch);
  if (it == index_.end() || it->second < kNumSpecial) {
    std::string where = position >= 0 ? " at position " + std::to_string(position) : "";
    Fail(ErrorCategory::kData, "character '" + ch + "'" + where + " missing from embedding table");
  }
  return it->second;
}

std::vector<int> CharVocab::Encode(const std::vector<std::string>& chars) const {
  std::vector<int> ids;
  ids.reserve(chars.size());
  for (size_t i = 0; i < chars.size(); ++i) ids.push_back(Id(chars[i], static_cast<long>(i)));
  return ids;
}

void CharVocab::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + path.string());
  for (int i = kNumSpecial; i < size(); ++i) out << symbols_[i] << '\n';
}

CharVocab CharVocab::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kMissingArtifact, "vocabulary not found: " + path.string());
  std::vector<std::string> chars;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty()) chars.push_back(line);
  }
  return CharVocab(std::move(chars));
}

}  // namespace prosody::frontend

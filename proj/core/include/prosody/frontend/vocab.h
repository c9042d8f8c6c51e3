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

#ifndef PROSODY_FRONTEND_VOCAB_H_
#define PROSODY_FRONTEND_VOCAB_H_

#include <filesystem>
#include <string>
#include <unordered_map>
#include <vector>

namespace prosody::frontend {

// Character table of the encoder: <pad>, <mask>, then sorted characters.
class CharVocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kMask = 1;
  static constexpr int kNumSpecial = 2;

  CharVocab() = default;
  explicit CharVocab(std::vector<std::string> chars);

  int size() const { return static_cast<int>(symbols_.size()); }
  bool Contains(const std::string& ch) const { return index_.count(ch) > 0; }
  // Throws kData naming the character (and position when given).
  int Id(const std::string& ch, long position = -1) const;
  std::vector<int> Encode(const std::vector<std::string>& chars) const;
  const std::string& Symbol(int id) const { return symbols_.at(id); }

  void Save(const std::filesystem::path& path) const;
  static CharVocab Load(const std::filesystem::path& path);

 private:
  std::vector<std::string> symbols_;
  std::unordered_map<std::string, int> index_;
};

}  // namespace prosody::frontend

#endif  // PROSODY_FRONTEND_VOCAB_H_

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

#ifndef PROSODY_LINGDATA_LEXICON_H_
#define PROSODY_LINGDATA_LEXICON_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "prosody/lingdata/inventory.h"

namespace prosody::lingdata {

// Character -> pronunciation candidates (toned pinyin syllables). A
// character with two or more candidates is a polyphone.
class Lexicon {
 public:
  void Add(const std::string& ch, std::vector<std::string> readings);

  bool Contains(const std::string& ch) const { return entries_.count(ch) > 0; }
  const std::vector<std::string>& Candidates(const std::string& ch) const;
  bool IsPolyphone(const std::string& ch) const { return Candidates(ch).size() >= 2; }
  size_t size() const { return entries_.size(); }
  std::vector<std::string> Characters() const;

  // Global label space of the polyphone head: every distinct reading of
  // every polyphonic character, sorted.
  const std::vector<std::string>& PolyphoneLabels() const { return polyphone_labels_; }
  int PolyphoneLabel(const std::string& reading) const;

  // Every candidate must decompose into inventory symbols; throws kData.
  void Validate(const PhonemeInventory& inventory) const;

  void Save(const std::filesystem::path& path) const;
  static Lexicon Load(const std::filesystem::path& path);

 private:
  void RebuildLabels();

  std::map<std::string, std::vector<std::string>> entries_;
  std::vector<std::string> polyphone_labels_;
};

// Splits UTF-8 text into code-point strings.
std::vector<std::string> SplitUtf8(const std::string& text);

}  // namespace prosody::lingdata

#endif  // PROSODY_LINGDATA_LEXICON_H_

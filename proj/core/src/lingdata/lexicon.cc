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

#include "prosody/lingdata/lexicon.h"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "prosody/common/error.h"

namespace prosody::lingdata {

void Lexicon::Add(const std::string& ch, std::vector<std::string> readings) {
  if (readings.empty()) {
    Fail(ErrorCategory::kData, "character '" + ch + "' has an empty candidate set");
  }
  auto it = entries_.find(ch);
  if (it != entries_.end() && it->second != readings) {
    Fail(ErrorCategory::kData, "conflicting lexicon entries for '" + ch + "'");
  }
  entries_[ch] = std::move(readings);
  RebuildLabels();
}

const std::vector<std::string>& Lexicon::Candidates(const std::string& ch) const {
  auto it = entries_.find(ch);
  if (it == entries_.end()) {
    Fail(ErrorCategory::kData, "character '" + ch + "' not in lexicon");
  }
  return it->second;
}

std::vector<std::string> Lexicon::Characters() const {
  std::vector<std::string> out;
  for (const auto& [ch, _] : entries_) out.push_back(ch);
  return out;
}

int Lexicon::PolyphoneLabel(const std::string& reading) const {
  auto it = std::lower_bound(polyphone_labels_.begin(), polyphone_labels_.end(), reading);
  if (it == polyphone_labels_.end() || *it != reading) {
    Fail(ErrorCategory::kData, "reading '" + reading + "' is not a polyphone label");
  }
  return static_cast<int>(it - polyphone_labels_.begin());
}

void Lexicon::RebuildLabels() {
  std::set<std::string> labels;
  for (const auto& [_, readings] : entries_) {
    if (readings.size() >= 2) labels.insert(readings.begin(), readings.end());
  }
  polyphone_labels_.assign(labels.begin(), labels.end());
}

void Lexicon::Validate(const PhonemeInventory& inventory) const {
  for (const auto& [ch, readings] : entries_) {
    for (const auto& r : readings) {
      try {
        inventory.SplitSyllable(r);
      } catch (const Error& e) {
        Fail(ErrorCategory::kData, "lexicon entry '" + ch + "': " + e.what());
      }
    }
  }
}

void Lexicon::Save(const std::filesystem::path& path) const {
  std::ofstream out(path);
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + path.string());
  for (const auto& [ch, readings] : entries_) {
    out << ch;
    for (const auto& r : readings) out << '\t' << r;
    out << '\n';
  }
}

Lexicon Lexicon::Load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) Fail(ErrorCategory::kMissingArtifact, "lexicon not found: " + path.string());
  Lexicon lex;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string ch, r;
    std::getline(ss, ch, '\t');
    std::vector<std::string> readings;
    while (std::getline(ss, r, '\t')) readings.push_back(r);
    lex.entries_[ch] = std::move(readings);
  }
  lex.RebuildLabels();
  return lex;
}

std::vector<std::string> SplitUtf8(const std::string& text) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < text.size()) {
    const auto c = static_cast<unsigned char>(text[i]);
    size_t len = 1;
    if (c >= 0xF0) {
      len = 4;
    } else if (c >= 0xE0) {
      len = 3;
    } else if (c >= 0xC0) {
      len = 2;
    }
    if (i + len > text.size()) Fail(ErrorCategory::kData, "truncated UTF-8 sequence");
    out.push_back(text.substr(i, len));
    i += len;
  }
  return out;
}

}  // namespace prosody::lingdata

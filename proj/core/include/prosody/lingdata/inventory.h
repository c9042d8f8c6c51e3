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

#ifndef PROSODY_LINGDATA_INVENTORY_H_
#define PROSODY_LINGDATA_INVENTORY_H_

#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace prosody::lingdata {

enum class PhonemeKind { kSpecial, kInitial, kFinal };

// Articulatory grouping used by the duration model and by the corruption
// model's same-category substitution.
enum class PhonemeClass {
  kSpecial,
  kStop,
  kAffricate,
  kFricative,
  kSonorant,
  kGlide,
  kSimpleFinal,
  kComplexFinal,
  kNasalFinal,
};

struct InventoryConfig {
  std::vector<std::string> initials;
  std::vector<std::string> toned_finals;  // each ends in a tone digit 1-5

  // Mandarin initials (including the glides y, w) and every final in tones
  // 1-5.
  static InventoryConfig Mandarin();
};

// Phoneme symbol table. Ids are contiguous from 0: PAD, MASK, SP, SIL, then
// the sorted linguistic symbols.
class PhonemeInventory {
 public:
  static constexpr int kPad = 0;
  static constexpr int kMask = 1;
  static constexpr int kSp = 2;
  static constexpr int kSil = 3;
  static constexpr int kNumSpecial = 4;

  static PhonemeInventory Build(const InventoryConfig& config);

  int size() const { return static_cast<int>(symbols_.size()); }
  int Id(std::string_view symbol) const;  // throws kData on unknown symbol
  bool Contains(std::string_view symbol) const;
  const std::string& Symbol(int id) const;
  PhonemeKind Kind(int id) const { return kinds_.at(id); }
  PhonemeClass Class(int id) const { return classes_.at(id); }
  bool IsSpecial(int id) const { return id < kNumSpecial; }
  const std::vector<std::string>& symbols() const { return symbols_; }

  // Ids sharing the articulatory class of `id`, for substitution noise.
  const std::vector<int>& SameClass(int id) const;

  // "chu1" -> {"ch", "u1"}; "an4" -> {"an4"}. Longest initial prefix wins.
  std::vector<std::string> SplitSyllable(std::string_view syllable) const;
  std::vector<int> SyllableIds(std::string_view syllable) const;

 private:
  std::vector<std::string> symbols_;
  std::vector<PhonemeKind> kinds_;
  std::vector<PhonemeClass> classes_;
  std::unordered_map<std::string, int> index_;
  std::vector<std::string> initials_by_length_;
  std::vector<std::vector<int>> by_class_;
};

PhonemeClass ClassifySymbol(std::string_view symbol, PhonemeKind kind);

}  // namespace prosody::lingdata

#endif  // PROSODY_LINGDATA_INVENTORY_H_

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

#include "prosody/lingdata/inventory.h"

#include <algorithm>
#include <set>

#include "prosody/common/error.h"

namespace prosody::lingdata {

namespace {

const char* const kSpecialSymbols[] = {"<pad>", "<mask>", "sp", "sil"};

bool EndsInTone(std::string_view s) {
  return !s.empty() && s.back() >= '1' && s.back() <= '5';
}

}  // namespace

InventoryConfig InventoryConfig::Mandarin() {
  InventoryConfig cfg;
  cfg.initials = {"b", "p", "m", "f", "d", "t", "n", "l", "g", "k", "h", "j",
                  "q", "x", "zh", "ch", "sh", "r", "z", "c", "s", "y", "w"};
  const char* finals[] = {"a",   "o",   "e",    "i",    "u",   "v",    "ai",
                          "ei",  "ao",  "ou",   "an",   "en",  "ang",  "eng",
                          "ong", "er",  "ia",   "ie",   "iao", "iu",   "ian",
                          "in",  "iang", "ing", "iong", "ua",  "uo",   "uai",
                          "ui",  "uan", "un",   "uang", "ue",  "van",  "vn"};
  for (const char* f : finals) {
    for (int tone = 1; tone <= 5; ++tone) {
      cfg.toned_finals.push_back(std::string(f) + std::to_string(tone));
    }
  }
  return cfg;
}

PhonemeClass ClassifySymbol(std::string_view symbol, PhonemeKind kind) {
  if (kind == PhonemeKind::kSpecial) return PhonemeClass::kSpecial;
  if (kind == PhonemeKind::kInitial) {
    static const std::set<std::string_view> stops{"b", "p", "d", "t", "g", "k"};
    static const std::set<std::string_view> affricates{"z", "c", "zh", "ch", "j", "q"};
    static const std::set<std::string_view> fricatives{"f", "s", "sh", "x", "h", "r"};
    static const std::set<std::string_view> glides{"y", "w"};
    if (stops.count(symbol)) return PhonemeClass::kStop;
    if (affricates.count(symbol)) return PhonemeClass::kAffricate;
    if (fricatives.count(symbol)) return PhonemeClass::kFricative;
    if (glides.count(symbol)) return PhonemeClass::kGlide;
    return PhonemeClass::kSonorant;
  }
  std::string_view base = symbol.substr(0, symbol.size() - 1);
  if (base.size() >= 1 && base.back() == 'n') return PhonemeClass::kNasalFinal;
  if (base.size() >= 2 && base.substr(base.size() - 2) == "ng") {
    return PhonemeClass::kNasalFinal;
  }
  if (base.size() == 1 || base == "er") return PhonemeClass::kSimpleFinal;
  return PhonemeClass::kComplexFinal;
}

PhonemeInventory PhonemeInventory::Build(const InventoryConfig& config) {
  std::set<std::string> seen;
  auto check_unique = [&](const std::string& s) {
    if (!seen.insert(s).second) {
      Fail(ErrorCategory::kConfig, "duplicate phoneme symbol '" + s + "'");
    }
  };
  for (const char* s : kSpecialSymbols) seen.insert(s);
  for (const auto& s : config.initials) {
    if (s.empty() || EndsInTone(s)) {
      Fail(ErrorCategory::kConfig, "initial '" + s + "' must not end in a tone digit");
    }
    check_unique(s);
  }
  for (const auto& s : config.toned_finals) {
    if (!EndsInTone(s) || s.size() < 2) {
      Fail(ErrorCategory::kConfig, "final '" + s + "' must end in a tone digit 1-5");
    }
    check_unique(s);
  }

  std::vector<std::pair<std::string, PhonemeKind>> linguistic;
  for (const auto& s : config.initials) linguistic.emplace_back(s, PhonemeKind::kInitial);
  for (const auto& s : config.toned_finals) linguistic.emplace_back(s, PhonemeKind::kFinal);
  std::sort(linguistic.begin(), linguistic.end());

  PhonemeInventory inv;
  for (const char* s : kSpecialSymbols) {
    inv.symbols_.emplace_back(s);
    inv.kinds_.push_back(PhonemeKind::kSpecial);
    inv.classes_.push_back(PhonemeClass::kSpecial);
  }
  for (auto& [s, kind] : linguistic) {
    inv.symbols_.push_back(s);
    inv.kinds_.push_back(kind);
    inv.classes_.push_back(ClassifySymbol(s, kind));
  }
  inv.by_class_.resize(static_cast<size_t>(PhonemeClass::kNasalFinal) + 1);
  for (int id = 0; id < inv.size(); ++id) {
    inv.index_[inv.symbols_[id]] = id;
    if (!inv.IsSpecial(id)) inv.by_class_[static_cast<size_t>(inv.classes_[id])].push_back(id);
  }
  inv.initials_by_length_ = config.initials;
  std::stable_sort(inv.initials_by_length_.begin(), inv.initials_by_length_.end(),
                   [](const std::string& a, const std::string& b) {
                     return a.size() > b.size();
                   });
  return inv;
}

int PhonemeInventory::Id(std::string_view symbol) const {
  auto it = index_.find(std::string(symbol));
  if (it == index_.end()) {
    Fail(ErrorCategory::kData, "unknown phoneme symbol '" + std::string(symbol) + "'");
  }
  return it->second;
}

bool PhonemeInventory::Contains(std::string_view symbol) const {
  return index_.count(std::string(symbol)) > 0;
}

const std::string& PhonemeInventory::Symbol(int id) const {
  if (id < 0 || id >= size()) {
    Fail(ErrorCategory::kData, "phoneme id " + std::to_string(id) + " out of range");
  }
  return symbols_[id];
}

const std::vector<int>& PhonemeInventory::SameClass(int id) const {
  if (IsSpecial(id)) Fail(ErrorCategory::kData, "special phonemes have no substitution class");
  return by_class_[static_cast<size_t>(Class(id))];
}

std::vector<std::string> PhonemeInventory::SplitSyllable(std::string_view syllable) const {
  if (!EndsInTone(syllable)) {
    Fail(ErrorCategory::kData, "syllable '" + std::string(syllable) + "' lacks a tone digit");
  }
  for (const auto& ini : initials_by_length_) {
    if (syllable.size() > ini.size() && syllable.substr(0, ini.size()) == ini) {
      std::string fin(syllable.substr(ini.size()));
      if (Contains(fin)) return {ini, fin};
    }
  }
  if (!Contains(syllable)) {
    Fail(ErrorCategory::kData, "syllable '" + std::string(syllable) +
                                   "' does not decompose into inventory symbols");
  }
  return {std::string(syllable)};
}

std::vector<int> PhonemeInventory::SyllableIds(std::string_view syllable) const {
  std::vector<int> ids;
  for (const auto& s : SplitSyllable(syllable)) ids.push_back(Id(s));
  return ids;
}

}  // namespace prosody::lingdata

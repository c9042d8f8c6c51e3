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

#ifndef PROSODY_LINGDATA_CORPUS_H_
#define PROSODY_LINGDATA_CORPUS_H_

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "prosody/lingdata/lexicon.h"

namespace prosody::lingdata {

// Boundary after a character, in increasing strength.
enum class Boundary : uint8_t { kNone = 0, kPW = 1, kPPH = 2, kIPH = 3 };
inline constexpr int kNumBoundaryLabels = 4;

std::string_view BoundaryName(Boundary b);  // "NB", "PW", "PPH", "IPH"
Boundary ParseBoundary(std::string_view name);

// Joint segmentation + POS tag. Label id = 2 * pos + (begin ? 0 : 1).
struct SegPosTag {
  int pos = 0;
  bool begin = true;

  int Id() const { return 2 * pos + (begin ? 0 : 1); }
  static SegPosTag FromId(int id) { return {id / 2, id % 2 == 0}; }
  friend bool operator==(const SegPosTag&, const SegPosTag&) = default;
};

struct AnnotatedSentence {
  std::vector<std::string> chars;
  std::vector<int> pinyin;  // index into the character's lexicon candidates
  std::vector<SegPosTag> seg_pos;
  std::vector<Boundary> prosody;  // boundary after each character

  size_t size() const { return chars.size(); }
  std::string Text() const;

  // Throws kData naming the first violated invariant.
  void Validate(int num_pos) const;
  friend bool operator==(const AnnotatedSentence&, const AnnotatedSentence&) = default;
};

struct WordEntry {
  std::string text;
  std::vector<std::string> chars;
  std::vector<std::string> readings;  // one per char; empty entry for the polyphone
  int pos = 0;
  int polyphone = -1;  // index into CorpusSpec::polyphones, or -1
};

// Reading selection for one polyphonic single-character word. Triggers are
// tried in order; the first whose neighbouring word (in `direction`) is in
// `words` decides the reading, otherwise `default_reading` applies.
struct PolyphoneRule {
  enum class Direction { kNext, kPrev };
  struct Trigger {
    Direction direction = Direction::kNext;
    std::set<int> words;  // WordEntry indices
    int reading = 0;
  };
  std::string ch;
  int word = -1;
  std::vector<std::string> readings;
  std::vector<Trigger> triggers;
  int default_reading = 0;
};

struct ProsodyRules {
  // (left POS, right POS) word pairs separated by a prosodic phrase break.
  std::set<std::pair<int, int>> pph_pairs;
  // An intonational phrase break precedes any word of these classes.
  std::set<int> iph_before;
  // A phrase reaching this many characters is closed with a PPH at the next
  // word boundary.
  int max_phrase_chars = 8;
};

struct DurationParams {
  // Base frames per phoneme class, indexed by PhonemeClass.
  std::vector<double> base_frames;
  double lengthening = 1.3;  // finals before PPH / IPH
  double noise_sigma = 0.05;
  std::pair<int, int> pw_pause{0, 1};   // extra frames on the final before PW
  std::pair<int, int> pph_pause{6, 10};
  std::pair<int, int> iph_pause{16, 24};
  std::pair<int, int> sil_frames{10, 16};

  static DurationParams Default();
  double Base(PhonemeClass c) const { return base_frames.at(static_cast<size_t>(c)); }
};

struct NoiseParams {
  double dur_sigma = 0.0;
  double sub_prob = 0.0;
  double sp_drop_prob = 0.0;

  // Documented noisy-pretraining preset.
  static NoiseParams Noisy() { return {0.2, 0.02, 0.1}; }
};

struct CorpusSpec {
  std::vector<std::string> pos_names;
  std::vector<WordEntry> words;
  std::vector<std::vector<int>> templates;  // POS sequences
  std::vector<PolyphoneRule> polyphones;
  ProsodyRules prosody;
  DurationParams durations = DurationParams::Default();
  NoiseParams noise = NoiseParams::Noisy();
  double polyphone_slot_prob = 0.25;  // chance a slot picks a polyphone word
  double trigger_bias = 0.6;         // chance a neighbour is drawn from a trigger set

  int num_pos() const { return static_cast<int>(pos_names.size()); }
  int num_seg_pos_labels() const { return 2 * num_pos(); }
  int PosId(const std::string& name) const;
  std::optional<int> FindWord(const std::string& text) const;

  // Built-in closed-vocabulary grammar: 8 POS classes, ~300 words and 14
  // polyphonic characters.
  static CorpusSpec Default();

  Lexicon BuildLexicon() const;
  // Polyphones whose trigger contexts no template can produce.
  std::vector<std::string> UnreachablePolyphones() const;
};

// Reading index of polyphone word `word_seq[i]` by replaying the rule table.
int ResolveReading(const CorpusSpec& spec, const std::vector<int>& word_seq, size_t i);

struct CorpusResult {
  std::vector<AnnotatedSentence> sentences;
  // One line per uncovered polyphone context (statically unreachable or
  // never emitted).
  std::vector<std::string> warnings;
};

// Deterministic in (spec, n, seed). Sentence i draws only from the stream
// DeriveSeed(seed, i), so any partition across `threads` gives identical
// output.
CorpusResult GenerateCorpus(const CorpusSpec& spec, size_t n, uint64_t seed,
                            int threads = 1);

// Word index sequence of a sentence, recovered from its B/I tags.
std::vector<int> SegmentWords(const CorpusSpec& spec, const AnnotatedSentence& s);

}  // namespace prosody::lingdata

#endif  // PROSODY_LINGDATA_CORPUS_H_

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

#include "prosody/lingdata/duration.h"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "prosody/common/error.h"
#include "prosody/common/rng.h"

namespace prosody::lingdata {

namespace {

int DrawRange(Rng& rng, std::pair<int, int> range) {
  return UniformInt(rng, range.first, range.second);
}

bool IsPause(int id) {
  return id == PhonemeInventory::kSp || id == PhonemeInventory::kSil;
}

}  // namespace

int DurationSample::TotalFrames() const {
  return std::accumulate(durations.begin(), durations.end(), 0);
}

void DurationSample::Validate(int inventory_size) const {
  const int span_sum = std::accumulate(char_spans.begin(), char_spans.end(), 0);
  if (span_sum != static_cast<int>(phoneme_ids.size())) {
    Fail(ErrorCategory::kData, "char_spans sum " + std::to_string(span_sum) +
                                   " != phoneme count " +
                                   std::to_string(phoneme_ids.size()));
  }
  for (int s : char_spans) {
    if (s < 1) Fail(ErrorCategory::kData, "char span must be >= 1");
  }
  for (int id : phoneme_ids) {
    if (id < 0 || id >= inventory_size) {
      Fail(ErrorCategory::kData, "phoneme id " + std::to_string(id) + " outside inventory");
    }
  }
  if (has_durations()) {
    if (durations.size() != phoneme_ids.size()) {
      Fail(ErrorCategory::kData, "durations length " + std::to_string(durations.size()) +
                                     " != phoneme count " +
                                     std::to_string(phoneme_ids.size()));
    }
    for (int d : durations) {
      if (d < 1) Fail(ErrorCategory::kData, "duration must be >= 1 frame");
    }
  }
}

DurationSample ComposePhonemes(const std::vector<std::string>& readings,
                               const std::vector<Boundary>& boundaries,
                               const PhonemeInventory& inv) {
  if (readings.size() != boundaries.size()) {
    Fail(ErrorCategory::kInvalidArgument, "readings / boundaries length mismatch");
  }
  DurationSample out;
  for (size_t i = 0; i < readings.size(); ++i) {
    const auto ids = inv.SyllableIds(readings[i]);
    out.phoneme_ids.insert(out.phoneme_ids.end(), ids.begin(), ids.end());
    out.char_spans.push_back(static_cast<int>(ids.size()));
    if (i + 1 < readings.size() && boundaries[i] >= Boundary::kPPH) {
      out.phoneme_ids.push_back(PhonemeInventory::kSp);
      out.char_spans.push_back(1);
    }
  }
  out.phoneme_ids.push_back(PhonemeInventory::kSil);
  out.char_spans.push_back(1);
  return out;
}

DurationSample G2pGold(const AnnotatedSentence& s, const Lexicon& lex,
                       const PhonemeInventory& inv) {
  std::vector<std::string> readings;
  for (size_t i = 0; i < s.size(); ++i) {
    if (!lex.Contains(s.chars[i])) {
      Fail(ErrorCategory::kData, "unknown character '" + s.chars[i] + "' at position " +
                                     std::to_string(i));
    }
    const auto& cands = lex.Candidates(s.chars[i]);
    if (s.pinyin[i] < 0 || s.pinyin[i] >= static_cast<int>(cands.size())) {
      Fail(ErrorCategory::kData, "pinyin index out of range for '" + s.chars[i] +
                                     "' at position " + std::to_string(i));
    }
    readings.push_back(cands[s.pinyin[i]]);
  }
  return ComposePhonemes(readings, s.prosody, inv);
}

DurationSample SynthDurations(const DurationSample& skeleton,
                              const std::vector<Boundary>& boundaries,
                              const DurationParams& params, const PhonemeInventory& inv,
                              uint64_t seed) {
  Rng rng(seed);
  auto noisy = [&](double frames) {
    if (params.noise_sigma > 0) frames *= std::exp(params.noise_sigma * StandardNormal(rng));
    return std::max(1, static_cast<int>(std::lround(frames)));
  };
  DurationSample out = skeleton;
  out.durations.assign(skeleton.size(), 0);
  size_t p = 0;
  size_t ch = 0;
  for (int span : skeleton.char_spans) {
    const int first = skeleton.phoneme_ids[p];
    if (span == 1 && IsPause(first)) {
      if (first == PhonemeInventory::kSil) {
        out.durations[p] = DrawRange(rng, params.sil_frames);
      } else {
        const bool iph = ch > 0 && boundaries.at(ch - 1) == Boundary::kIPH;
        out.durations[p] = DrawRange(rng, iph ? params.iph_pause : params.pph_pause);
      }
      ++p;
      continue;
    }
    const Boundary b = boundaries.at(ch++);
    for (int k = 0; k < span; ++k, ++p) {
      const int id = skeleton.phoneme_ids[p];
      double base = params.Base(inv.Class(id));
      const bool last = k + 1 == span;
      if (last && inv.Kind(id) == PhonemeKind::kFinal && b >= Boundary::kPPH) {
        base *= params.lengthening;
      }
      int frames = noisy(base);
      if (last && b == Boundary::kPW) frames += DrawRange(rng, params.pw_pause);
      out.durations[p] = frames;
    }
  }
  return out;
}

std::vector<DurationSample> Corrupt(const std::vector<DurationSample>& data,
                                    const NoiseParams& noise, const PhonemeInventory& inv,
                                    uint64_t seed) {
  for (double prob : {noise.sub_prob, noise.sp_drop_prob}) {
    if (prob < 0 || prob > 1) {
      Fail(ErrorCategory::kInvalidArgument, "noise probabilities must lie in [0, 1]");
    }
  }
  if (noise.dur_sigma < 0) Fail(ErrorCategory::kInvalidArgument, "dur_sigma must be >= 0");
  std::vector<DurationSample> out;
  out.reserve(data.size());
  for (size_t i = 0; i < data.size(); ++i) {
    const DurationSample& in = data[i];
    if (!in.has_durations()) Fail(ErrorCategory::kData, "corrupt needs durations");
    Rng rng = MakeRng(seed, i);
    DurationSample s = in;
    for (size_t p = 0; p < s.size(); ++p) {
      const int id = s.phoneme_ids[p];
      if (!inv.IsSpecial(id) && noise.sub_prob > 0 && Bernoulli(rng, noise.sub_prob)) {
        const auto& pool = inv.SameClass(id);
        if (pool.size() > 1) {
          int pick = pool[rng() % (pool.size() - 1)];
          if (pick == id) pick = pool.back();
          s.phoneme_ids[p] = pick;
        }
      }
      if (noise.dur_sigma > 0) {
        const double d = s.durations[p] * std::exp(noise.dur_sigma * StandardNormal(rng));
        s.durations[p] = std::max(1, static_cast<int>(std::lround(d)));
      }
    }
    if (noise.sp_drop_prob > 0) {
      DurationSample kept;
      size_t p = 0;
      for (int span : s.char_spans) {
        const bool drop = span == 1 && s.phoneme_ids[p] == PhonemeInventory::kSp && p > 0 &&
                          Bernoulli(rng, noise.sp_drop_prob);
        if (drop) {
          kept.durations.back() += s.durations[p];
        } else {
          for (int k = 0; k < span; ++k) {
            kept.phoneme_ids.push_back(s.phoneme_ids[p + k]);
            kept.durations.push_back(s.durations[p + k]);
          }
          kept.char_spans.push_back(span);
        }
        p += span;
      }
      s = std::move(kept);
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace prosody::lingdata

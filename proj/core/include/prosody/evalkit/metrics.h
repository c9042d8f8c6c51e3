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

#ifndef PROSODY_EVALKIT_METRICS_H_
#define PROSODY_EVALKIT_METRICS_H_

#include <optional>
#include <vector>

#include "prosody/lingdata/corpus.h"

namespace prosody::evalkit {

// Exact-match fraction; absent when there are no polyphone positions.
std::optional<double> PolyphoneAccuracy(const std::vector<int>& pred,
                                        const std::vector<int>& gold);

struct F1Counts {
  long tp = 0;
  long fp = 0;
  long fn = 0;

  F1Counts& operator+=(const F1Counts& o) {
    tp += o.tp;
    fp += o.fp;
    fn += o.fn;
    return *this;
  }
  double Precision() const { return tp + fp == 0 ? 0.0 : static_cast<double>(tp) / (tp + fp); }
  double Recall() const { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / (tp + fn); }
  double F1() const {
    return 2 * tp + fp + fn == 0 ? 0.0 : 2.0 * tp / (2.0 * tp + fp + fn);
  }
};

struct Span {
  int start = 0;
  int end = 0;  // exclusive
  int pos = 0;

  friend bool operator==(const Span&, const Span&) = default;
  friend auto operator<=>(const Span&, const Span&) = default;
};

// Maximal B I..I runs of one POS. An I that does not continue the open span
// (different POS, or sequence start) opens a new span.
std::vector<Span> DecodeSpans(const std::vector<lingdata::SegPosTag>& tags);
std::vector<Span> DecodeSpanIds(const std::vector<int>& tag_ids);

F1Counts SpanCounts(const std::vector<int>& pred_ids, const std::vector<int>& gold_ids);
// Micro-averaged over sentences.
double SpanF1(const std::vector<std::vector<int>>& pred, const std::vector<std::vector<int>>& gold);

// A position is positive for `tier` when its label is >= tier.
F1Counts BoundaryCounts(const std::vector<int>& pred, const std::vector<int>& gold,
                        lingdata::Boundary tier);
// Absent when gold has no positive position.
std::optional<double> BoundaryF1(const std::vector<std::vector<int>>& pred,
                                 const std::vector<std::vector<int>>& gold,
                                 lingdata::Boundary tier);

}  // namespace prosody::evalkit

#endif  // PROSODY_EVALKIT_METRICS_H_

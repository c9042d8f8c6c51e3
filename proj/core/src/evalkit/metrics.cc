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

#include "prosody/evalkit/metrics.h"

#include <algorithm>

#include "prosody/common/error.h"

namespace prosody::evalkit {

namespace {

void CheckSameLength(size_t a, size_t b, const char* what) {
  if (a != b) {
    Fail(ErrorCategory::kShape, std::string(what) + ": prediction length " +
                                    std::to_string(a) + " != gold length " +
                                    std::to_string(b));
  }
}

}  // namespace

std::optional<double> PolyphoneAccuracy(const std::vector<int>& pred,
                                        const std::vector<int>& gold) {
  CheckSameLength(pred.size(), gold.size(), "polyphone accuracy");
  if (gold.empty()) return std::nullopt;
  long hit = 0;
  for (size_t i = 0; i < gold.size(); ++i) hit += pred[i] == gold[i];
  return static_cast<double>(hit) / static_cast<double>(gold.size());
}

std::vector<Span> DecodeSpans(const std::vector<lingdata::SegPosTag>& tags) {
  std::vector<Span> spans;
  for (size_t i = 0; i < tags.size(); ++i) {
    const int p = static_cast<int>(i);
    const bool extends = !tags[i].begin && !spans.empty() && spans.back().end == p &&
                         spans.back().pos == tags[i].pos;
    if (extends) {
      spans.back().end = p + 1;
    } else {
      spans.push_back({p, p + 1, tags[i].pos});
    }
  }
  return spans;
}

std::vector<Span> DecodeSpanIds(const std::vector<int>& tag_ids) {
  std::vector<lingdata::SegPosTag> tags;
  tags.reserve(tag_ids.size());
  for (int id : tag_ids) tags.push_back(lingdata::SegPosTag::FromId(id));
  return DecodeSpans(tags);
}

F1Counts SpanCounts(const std::vector<int>& pred_ids, const std::vector<int>& gold_ids) {
  CheckSameLength(pred_ids.size(), gold_ids.size(), "span F1");
  auto pred = DecodeSpanIds(pred_ids);
  auto gold = DecodeSpanIds(gold_ids);
  std::sort(pred.begin(), pred.end());
  std::sort(gold.begin(), gold.end());
  std::vector<Span> common;
  std::set_intersection(pred.begin(), pred.end(), gold.begin(), gold.end(),
                        std::back_inserter(common));
  F1Counts c;
  c.tp = static_cast<long>(common.size());
  c.fp = static_cast<long>(pred.size()) - c.tp;
  c.fn = static_cast<long>(gold.size()) - c.tp;
  return c;
}

double SpanF1(const std::vector<std::vector<int>>& pred,
              const std::vector<std::vector<int>>& gold) {
  CheckSameLength(pred.size(), gold.size(), "span F1 corpus");
  F1Counts total;
  for (size_t i = 0; i < gold.size(); ++i) total += SpanCounts(pred[i], gold[i]);
  return total.F1();
}

F1Counts BoundaryCounts(const std::vector<int>& pred, const std::vector<int>& gold,
                        lingdata::Boundary tier) {
  CheckSameLength(pred.size(), gold.size(), "boundary F1");
  const int t = static_cast<int>(tier);
  F1Counts c;
  for (size_t i = 0; i < gold.size(); ++i) {
    const bool p = pred[i] >= t;
    const bool g = gold[i] >= t;
    c.tp += p && g;
    c.fp += p && !g;
    c.fn += !p && g;
  }
  return c;
}

std::optional<double> BoundaryF1(const std::vector<std::vector<int>>& pred,
                                 const std::vector<std::vector<int>>& gold,
                                 lingdata::Boundary tier) {
  CheckSameLength(pred.size(), gold.size(), "boundary F1 corpus");
  F1Counts total;
  for (size_t i = 0; i < gold.size(); ++i) total += BoundaryCounts(pred[i], gold[i], tier);
  if (total.tp + total.fn == 0) return std::nullopt;
  return total.F1();
}

}  // namespace prosody::evalkit

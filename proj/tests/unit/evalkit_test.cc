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

#include <algorithm>
#include <filesystem>
#include <random>

#include "gtest/gtest.h"

#include "prosody/common/error.h"
#include "prosody/evalkit/metrics.h"
#include "prosody/evalkit/probe.h"
#include "prosody/evalkit/report.h"
#include "prosody/frontend/vocab.h"
#include "prosody/lingdata/duration.h"

namespace prosody::evalkit {
namespace {

using lingdata::Boundary;
using lingdata::PhonemeInventory;
using lingdata::SegPosTag;

constexpr int kNB = 0;
constexpr int kPPH = 2;
constexpr int kIPH = 3;

std::vector<int> Tags(std::initializer_list<SegPosTag> tags) {
  std::vector<int> out;
  for (const auto& t : tags) out.push_back(t.Id());
  return out;
}

TEST(PolyphoneAccuracy, HandCases) {
  EXPECT_DOUBLE_EQ(*PolyphoneAccuracy({1, 0, 2}, {1, 0, 2}), 1.0);
  EXPECT_DOUBLE_EQ(*PolyphoneAccuracy({1, 0, 2, 1}, {1, 1, 2, 0}), 0.5);
  EXPECT_FALSE(PolyphoneAccuracy({}, {}).has_value());
  EXPECT_THROW(PolyphoneAccuracy({1}, {1, 2}), Error);
}

TEST(SpanF1, IdenticalSequencesScoreOne) {
  const auto gold = Tags({{0, true}, {0, false}, {3, true}, {1, true}, {1, false}, {1, false}});
  EXPECT_DOUBLE_EQ(SpanF1({gold}, {gold}), 1.0);
}

TEST(SpanF1, SplitWordHandCount) {
  // gold: [n n][v]   pred: [n][n][v]
  // TP = {v}, FP = {n@0, n@1}, FN = {nn@0-2}; P = 1/3, R = 1/2.
  const auto gold = Tags({{0, true}, {0, false}, {1, true}});
  const auto pred = Tags({{0, true}, {0, true}, {1, true}});
  const F1Counts c = SpanCounts(pred, gold);
  EXPECT_EQ(c.tp, 1);
  EXPECT_EQ(c.fp, 2);
  EXPECT_EQ(c.fn, 1);
  const double p = 1.0 / 3, r = 0.5;
  EXPECT_NEAR(SpanF1({pred}, {gold}), 2 * p * r / (p + r), 1e-12);
}

TEST(SpanF1, MicroAveragesOverSentences) {
  const auto a = Tags({{0, true}, {0, false}});
  const auto b = Tags({{1, true}, {2, true}});
  const auto b_bad = Tags({{1, true}, {1, false}});  // merges the two gold words
  // sentence 1: tp 1; sentence 2: tp 0, fp 1, fn 2. Micro F1 = 2 / (2 + 1 + 2).
  EXPECT_DOUBLE_EQ(SpanF1({a, b_bad}, {a, b}), 2.0 / 5.0);
  // averaging per-sentence F1 would give (1 + 0) / 2 instead
  EXPECT_NE(SpanF1({a, b_bad}, {a, b}), 0.5);
}

TEST(DecodeSpans, LenientOnMalformedRuns) {
  const auto spans = DecodeSpans({{2, false}, {2, false}, {3, false}, {3, true}});
  ASSERT_EQ(spans.size(), 3u);
  EXPECT_EQ(spans[0], (Span{0, 2, 2}));
  EXPECT_EQ(spans[1], (Span{2, 3, 3}));
  EXPECT_EQ(spans[2], (Span{3, 4, 3}));
}

TEST(BoundaryF1, IdenticalLabelsScoreOnePerTier) {
  const std::vector<int> gold{0, 1, 0, 2, 1, 3};
  for (Boundary t : {Boundary::kPW, Boundary::kPPH, Boundary::kIPH}) {
    EXPECT_DOUBLE_EQ(*BoundaryF1({gold}, {gold}, t), 1.0);
  }
}

TEST(BoundaryF1, CumulativeTierHandCase) {
  // gold [NB, PPH], pred [NB, IPH]: an IPH implies a PPH.
  const std::vector<std::vector<int>> gold{{kNB, kPPH}};
  const std::vector<std::vector<int>> pred{{kNB, kIPH}};
  EXPECT_DOUBLE_EQ(*BoundaryF1(pred, gold, Boundary::kPPH), 1.0);
  EXPECT_DOUBLE_EQ(*BoundaryF1(pred, gold, Boundary::kPW), 1.0);
  EXPECT_FALSE(BoundaryF1(pred, gold, Boundary::kIPH).has_value());
  const F1Counts c = BoundaryCounts(pred[0], gold[0], Boundary::kIPH);
  EXPECT_EQ(c.fp, 1);
  EXPECT_EQ(c.tp + c.fn, 0);
}

TEST(BoundaryF1, OneIffEqualAndMonotoneUnderNestedCorruption) {
  std::mt19937 gen(17);
  std::uniform_int_distribution<int> label(0, 3);
  std::vector<int> gold(400);
  for (int& g : gold) g = label(gen);
  std::vector<size_t> order(gold.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::shuffle(order.begin(), order.end(), gen);
  for (Boundary t : {Boundary::kPW, Boundary::kPPH, Boundary::kIPH}) {
    const int tier = static_cast<int>(t);
    double prev = 1.0;
    std::vector<int> pred = gold;
    for (size_t level = 0; level < 10; ++level) {
      // each level flips tier membership at 20 more positions
      for (size_t k = level * 20; k < (level + 1) * 20; ++k) {
        const size_t i = order[k];
        pred[i] = gold[i] >= tier ? tier - 1 : tier;
      }
      const double f1 = *BoundaryF1({pred}, {gold}, t);
      EXPECT_LT(f1, 1.0);
      EXPECT_LE(f1, prev + 1e-12) << "level " << level;
      prev = f1;
    }
  }
}

TEST(Metrics, PermutationInvariantAcrossSentences) {
  std::mt19937 gen(3);
  std::uniform_int_distribution<int> label(0, 3), tag(0, 9);
  std::vector<std::vector<int>> gold, pred, gtags, ptags;
  for (int s = 0; s < 30; ++s) {
    const int n = 3 + s % 7;
    std::vector<int> g(n), p(n), gt(n), pt(n);
    for (int i = 0; i < n; ++i) {
      g[i] = label(gen);
      p[i] = label(gen);
      gt[i] = tag(gen);
      pt[i] = tag(gen);
    }
    gold.push_back(g);
    pred.push_back(p);
    gtags.push_back(gt);
    ptags.push_back(pt);
  }
  const double f1 = *BoundaryF1(pred, gold, Boundary::kPPH);
  const double sf1 = SpanF1(ptags, gtags);
  std::vector<size_t> perm(gold.size());
  for (size_t i = 0; i < perm.size(); ++i) perm[i] = i;
  std::shuffle(perm.begin(), perm.end(), gen);
  std::vector<std::vector<int>> g2, p2, gt2, pt2;
  for (size_t i : perm) {
    g2.push_back(gold[i]);
    p2.push_back(pred[i]);
    gt2.push_back(gtags[i]);
    pt2.push_back(ptags[i]);
  }
  EXPECT_DOUBLE_EQ(*BoundaryF1(p2, g2, Boundary::kPPH), f1);
  EXPECT_DOUBLE_EQ(SpanF1(pt2, gt2), sf1);
}

class PauseTest : public ::testing::Test {
 protected:
  static const PhonemeInventory& Inv() {
    static const PhonemeInventory inv =
        PhonemeInventory::Build(lingdata::InventoryConfig::Mandarin());
    return inv;
  }
};

TEST_F(PauseTest, HandCaseCountsMissingSpAsZero) {
  // 4 chars, gold [PPH, NB, PPH, IPH]; SP only after char 0.
  lingdata::DurationSample s;
  s.phoneme_ids = {10, 11, PhonemeInventory::kSp, 12, 13, 14, PhonemeInventory::kSil};
  s.char_spans = {2, 1, 1, 1, 1, 1};
  s.durations = {5, 6, 7, 4, 3, 6, 12};
  const auto st = MeasurePauses(s, {Boundary::kPPH, Boundary::kNone, Boundary::kPPH,
                                    Boundary::kIPH});
  EXPECT_EQ(st.boundaries, 2);
  EXPECT_EQ(st.hits, 1);
  EXPECT_DOUBLE_EQ(st.MeanBoundaryFrames(), 3.5);
  EXPECT_EQ(st.gaps, 1);
  EXPECT_DOUBLE_EQ(st.MeanGapFrames(), 0.0);
  EXPECT_DOUBLE_EQ(st.HitRate(), 0.5);
}

TEST_F(PauseTest, RejectsSkeletonWithoutDurations) {
  lingdata::DurationSample s;
  s.phoneme_ids = {10, PhonemeInventory::kSil};
  s.char_spans = {1, 1};
  EXPECT_THROW(MeasurePauses(s, {Boundary::kIPH}), Error);
}

TEST_F(PauseTest, GroundTruthReplayFallsInGeneratorBand) {
  const auto spec = lingdata::CorpusSpec::Default();
  const auto lex = spec.BuildLexicon();
  const auto corpus = lingdata::GenerateCorpus(spec, 300, 41).sentences;
  PauseStats total;
  long with_pph = 0;
  for (size_t i = 0; i < corpus.size(); ++i) {
    if (!HasPphBoundary(corpus[i])) continue;
    ++with_pph;
    const auto sample =
        lingdata::SynthDurations(lingdata::G2pGold(corpus[i], lex, Inv()), corpus[i].prosody,
                                 spec.durations, Inv(), 100 + i);
    const PauseStats one = MeasurePauses(sample, corpus[i].prosody);
    EXPECT_GE(one.boundaries, 1);
    EXPECT_GE(one.boundary_frames, 6.0 * one.boundaries);
    EXPECT_LE(one.boundary_frames, 10.0 * one.boundaries);
    total += one;
  }
  ASSERT_GT(with_pph, 50);
  EXPECT_DOUBLE_EQ(total.HitRate(), 1.0);
  EXPECT_GE(total.MeanBoundaryFrames(), 6.0);
  EXPECT_LE(total.MeanBoundaryFrames(), 10.0);
  EXPECT_DOUBLE_EQ(total.MeanGapFrames(), 0.0);
}

TEST_F(PauseTest, ProbeVisitsEveryGoldBoundary) {
  const auto spec = lingdata::CorpusSpec::Default();
  const auto lex = spec.BuildLexicon();
  const auto corpus = lingdata::GenerateCorpus(spec, 12, 43).sentences;
  frontend::CharVocab vocab(lex.Characters());
  frontend::CharEncoderConfig fc;
  fc.vocab_size = vocab.size();
  fc.hidden = 8;
  fc.blocks = 1;
  fc.conv_filter = 8;
  fc.polyphone_labels = static_cast<int>(lex.PolyphoneLabels().size());
  fc.seg_pos_labels = spec.num_seg_pos_labels();
  fc.tasks = {frontend::Task::kPolyphone, frontend::Task::kProsody};
  Rng rng(1);
  frontend::CharEncoder<float> fe(fc, rng);
  acoustic::AcousticConfig ac;
  ac.phoneme_vocab = Inv().size();
  ac.hidden = 8;
  ac.encoder_blocks = 1;
  ac.decoder_blocks = 1;
  ac.conv_filter = 8;
  ac.duration_filter = 8;
  ac.mel_dims = 4;
  long expected = 0;
  for (const auto& s : corpus) {
    for (size_t i = 0; i + 1 < s.size(); ++i) expected += s.prosody[i] == Boundary::kPPH;
  }
  for (bool use_frontend : {false, true}) {
    ac.use_frontend = use_frontend;
    ac.char_hidden = fc.hidden;
    acoustic::AcousticModel<float> model(ac, rng);
    const PauseStats st = BoundaryPauseProbe(model, fe, &fe, vocab, lex, Inv(), corpus);
    EXPECT_EQ(st.boundaries, expected);
    EXPECT_GE(st.HitRate(), 0.0);
    EXPECT_LE(st.HitRate(), 1.0);
  }
}

TEST(EvalReport, RecordsSkipAbsentMetricsAndValidateRanges) {
  EvalReport r;
  r.span_f1 = 0.5;
  r.duration_mae = 1.25;
  const auto rec = r.Records();
  ASSERT_EQ(rec.size(), 2u);
  EXPECT_EQ(rec[0].first, "span_f1");
  EXPECT_EQ(rec[1].first, "duration_mae_frames");
  EXPECT_NO_THROW(r.Validate());
  r.pph_f1 = 1.5;
  try {
    r.Validate();
    FAIL() << "expected a range error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kNumeric);
    EXPECT_NE(std::string(e.what()).find("pph_f1"), std::string::npos);
  }
}

TEST(EvalReport, RecordFileRoundTrip) {
  const auto path = std::filesystem::temp_directory_path() / "evalkit_records_test.txt";
  const Records rec{{"a", 0.125}, {"b", 3.0}, {"c", 1.0 / 3}};
  WriteRecords(path, rec);
  const Records back = ReadRecords(path);
  ASSERT_EQ(back.size(), rec.size());
  for (size_t i = 0; i < rec.size(); ++i) {
    EXPECT_EQ(back[i].first, rec[i].first);
    EXPECT_NEAR(back[i].second, rec[i].second, 1e-9);
  }
  std::filesystem::remove(path);
  EXPECT_THROW(ReadRecords(path), Error);
}

TEST(FormatTable, AlignsColumnsAndMarksAbsentCells) {
  const std::string t = FormatTable("T", {"A", "Long-B"},
                                    {{"x", {1.0, std::nullopt}}, {"system-y", {12.345, 0.5}}});
  EXPECT_EQ(t,
            "T\n"
            "System        A  Long-B\n"
            "-----------------------\n"
            "x          1.00       -\n"
            "system-y  12.35    0.50\n");
  EXPECT_THROW(FormatTable("", {"A"}, {{"x", {}}}), Error);
}

TEST(FrontendTable, PrintsPercent) {
  EvalReport r;
  r.polyphone_accuracy = 0.9886;
  const std::string t = FrontendTable({{"multi", r}});
  EXPECT_NE(t.find("98.86"), std::string::npos);
  EXPECT_NE(t.find("F1-CWS+POS"), std::string::npos);
}

}  // namespace
}  // namespace prosody::evalkit

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
#include <cmath>
#include <filesystem>
#include <set>

#include "gtest/gtest.h"

#include "gradcheck.h"

#include "prosody/common/error.h"
#include "prosody/frontend/char_encoder.h"
#include "prosody/frontend/features.h"
#include "prosody/frontend/inference.h"
#include "prosody/frontend/training.h"
#include "prosody/lingdata/corpus.h"
#include "prosody/lingdata/duration.h"
#include "prosody/nn/loss.h"

namespace prosody::frontend {
namespace {

using lingdata::Boundary;

class FrontendTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    spec_ = new lingdata::CorpusSpec(lingdata::CorpusSpec::Default());
    inv_ = new lingdata::PhonemeInventory(
        lingdata::PhonemeInventory::Build(lingdata::InventoryConfig::Mandarin()));
    lex_ = new lingdata::Lexicon(spec_->BuildLexicon());
    vocab_ = new CharVocab(lex_->Characters());
    corpus_ = new std::vector<lingdata::AnnotatedSentence>(
        lingdata::GenerateCorpus(*spec_, 120, 5).sentences);
  }
  static void TearDownTestSuite() {
    delete spec_;
    delete inv_;
    delete lex_;
    delete vocab_;
    delete corpus_;
  }

  static CharEncoderConfig SmallConfig(std::set<Task> tasks = {}) {
    CharEncoderConfig c;
    c.vocab_size = vocab_->size();
    c.hidden = 16;
    c.blocks = 1;
    c.heads = 2;
    c.conv_filter = 32;
    c.polyphone_labels = static_cast<int>(lex_->PolyphoneLabels().size());
    c.seg_pos_labels = spec_->num_seg_pos_labels();
    c.tasks = std::move(tasks);
    return c;
  }

  static TrainConfig SmallTrain(int steps) {
    TrainConfig t;
    t.steps = steps;
    t.batch_size = 8;
    t.optimizer.warmup_steps = 10;
    t.optimizer.model_width = 16;
    return t;
  }

  static std::vector<nn::Matrix<float>> Snapshot(const nn::ParamList<float>& params) {
    std::vector<nn::Matrix<float>> out;
    for (const auto& p : params) out.push_back(p.tensor.value());
    return out;
  }

  static const lingdata::AnnotatedSentence* FindSentence(bool with_polyphone) {
    for (const auto& s : *corpus_) {
      bool any = false;
      for (const auto& ch : s.chars) any = any || lex_->IsPolyphone(ch);
      if (any == with_polyphone) return &s;
    }
    return nullptr;
  }

  static lingdata::CorpusSpec* spec_;
  static lingdata::PhonemeInventory* inv_;
  static lingdata::Lexicon* lex_;
  static CharVocab* vocab_;
  static std::vector<lingdata::AnnotatedSentence>* corpus_;
};

lingdata::CorpusSpec* FrontendTest::spec_ = nullptr;
lingdata::PhonemeInventory* FrontendTest::inv_ = nullptr;
lingdata::Lexicon* FrontendTest::lex_ = nullptr;
CharVocab* FrontendTest::vocab_ = nullptr;
std::vector<lingdata::AnnotatedSentence>* FrontendTest::corpus_ = nullptr;

TEST_F(FrontendTest, VocabRejectsUnknownCharacterByName) {
  try {
    vocab_->Id("Z", 3);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kData);
    EXPECT_NE(std::string(e.what()).find("'Z'"), std::string::npos);
    EXPECT_NE(std::string(e.what()).find("missing from embedding table"), std::string::npos);
  }
}

TEST(MaskCharacters, RateZeroIsIdentity) {
  Rng rng(1);
  const std::vector<int> ids{2, 5, 9, 3, 7};
  const MaskedIds m = MaskCharacters(ids, 0.0, rng);
  EXPECT_EQ(m.ids, ids);
  EXPECT_EQ(std::count(m.flags.begin(), m.flags.end(), true), 0);
}

TEST(MaskCharacters, MaskedFractionWithinBinomialBound) {
  // sd = sqrt(0.15 * 0.85 / 1e5) ~ 0.00113; the band is about 4.4 sd wide
  // on each side.
  Rng rng(2024);
  const std::vector<int> ids(100000, 7);
  const MaskedIds m = MaskCharacters(ids, 0.15, rng);
  const long masked = std::count(m.flags.begin(), m.flags.end(), true);
  EXPECT_GE(masked, 14500);
  EXPECT_LE(masked, 15500);
  for (size_t i = 0; i < ids.size(); ++i) {
    EXPECT_EQ(m.ids[i] == CharVocab::kMask, m.flags[i]);
  }
}

TEST(MaskCharacters, SpecialsAreNeverSelected) {
  Rng rng(3);
  const std::vector<int> ids(1000, CharVocab::kPad);
  const MaskedIds m = MaskCharacters(ids, 0.9, rng);
  EXPECT_EQ(std::count(m.flags.begin(), m.flags.end(), true), 0);
}

TEST_F(FrontendTest, MlmWithZeroMaskRateLeavesParametersUnchanged) {
  Rng rng(4);
  CharEncoder<float> enc(SmallConfig(), rng);
  const auto before = Snapshot(enc.Params());
  auto data = MakeExamples(*corpus_, *vocab_, *lex_, {});
  TrainConfig cfg = SmallTrain(5);
  cfg.mask_rate = 0.0;
  const MlmReport report = PretrainCharMlm(enc, data, {}, cfg, 9);
  EXPECT_TRUE(report.train.points.empty());
  const auto after = Snapshot(enc.Params());
  for (size_t i = 0; i < before.size(); ++i) EXPECT_EQ(before[i], after[i]);
}

TEST_F(FrontendTest, MlmReducesTrainingLoss) {
  Rng rng(5);
  CharEncoder<float> enc(SmallConfig(), rng);
  auto data = MakeExamples(*corpus_, *vocab_, *lex_, {});
  TrainConfig cfg = SmallTrain(120);
  cfg.log_every = 20;
  cfg.optimizer.lr_scale = 0.3;
  const MlmReport report = PretrainCharMlm(enc, data, data, cfg, 10);
  EXPECT_LT(report.final_heldout_loss, report.initial_heldout_loss);
}

TEST_F(FrontendTest, ZeroHeadPredictsLabelZero) {
  Rng rng(6);
  CharEncoder<float> enc(SmallConfig({Task::kProsody, Task::kSegPos}), rng);
  enc.head_weight(Task::kProsody).mutable_value().setZero();
  const auto ids = vocab_->Encode(corpus_->front().chars);
  const auto labels = PredictTags(enc, ids, Task::kProsody);
  ASSERT_EQ(labels.size(), ids.size());
  for (int l : labels) EXPECT_EQ(l, 0);
}

TEST_F(FrontendTest, PredictTagsWithoutHeadFails) {
  Rng rng(7);
  CharEncoder<float> enc(SmallConfig({Task::kProsody}), rng);
  EXPECT_THROW(PredictTags(enc, vocab_->Encode(corpus_->front().chars), Task::kPolyphone),
               Error);
}

TEST(ArgmaxRows, TiesGoToLowestLabel) {
  nn::Matrix<float> m(2, 3);
  m << 1, 1, 1, 0, 2, 2;
  EXPECT_EQ(ArgmaxRows(m), (std::vector<int>{0, 1}));
}

TEST(MaskedArgmax, RenormalizesOverCandidatesOnly) {
  // Labels 1 (A) and 4 (B); most of the mass sits on non-candidates.
  nn::RowVector<float> probs(6);
  probs << 0.5f, 0.1f, 0.2f, 0.1f, 0.05f, 0.05f;
  EXPECT_EQ(MaskedArgmax(probs, {1, 4}), 0);
  EXPECT_EQ(MaskedArgmax(probs, {4, 1}), 1);
  EXPECT_THROW(MaskedArgmax(probs, {}), Error);
}

TEST(MaskedArgmax, InvariantUnderPositiveLogitScaling) {
  Rng rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    nn::Matrix<double> logits(1, 12);
    for (nn::Index c = 0; c < 12; ++c) logits(0, c) = 4 * (Uniform01(rng) - 0.5);
    const std::vector<int> cands{static_cast<int>(rng() % 4), 4 + static_cast<int>(rng() % 4),
                                 8 + static_cast<int>(rng() % 4)};
    const nn::RowVector<float> base =
        nn::SoftmaxRowsValue<double>(logits).cast<float>().row(0);
    const int ref = MaskedArgmax(base, cands);
    for (double scale : {0.25, 0.5, 2.0, 3.0}) {
      const nn::Matrix<double> scaled = logits * scale;
      const nn::RowVector<float> p = nn::SoftmaxRowsValue<double>(scaled).cast<float>().row(0);
      EXPECT_EQ(MaskedArgmax(p, cands), ref) << "trial " << trial << " scale " << scale;
    }
  }
}

TEST(UpsampleIndex, RepeatsCharacterRows) {
  // Two non-pause characters with spans [2, 1].
  const auto index = UpsampleIndex({10, 11, 12}, {2, 1});
  EXPECT_EQ(index, (std::vector<nn::Index>{0, 0, 1}));
  nn::Matrix<float> emb(2, 3);
  emb << 1, 2, 3, 4, 5, 6;
  const nn::Matrix<float> up = nn::GatherRows(nn::Tensor<float>(emb), index).value();
  ASSERT_EQ(up.rows(), 3);
  EXPECT_EQ(up.row(0), emb.row(0));
  EXPECT_EQ(up.row(1), emb.row(0));
  EXPECT_EQ(up.row(2), emb.row(1));
}

TEST(UpsampleIndex, PausesInheritOwningCharacter) {
  using lingdata::PhonemeInventory;
  // char0 (2 phonemes), SP, char1 (1 phoneme), SIL
  const auto index =
      UpsampleIndex({10, 11, PhonemeInventory::kSp, 12, PhonemeInventory::kSil}, {2, 1, 1, 1});
  EXPECT_EQ(index, (std::vector<nn::Index>{0, 0, 0, 1, 1}));
}

TEST(UpsampleIndex, SpanMismatchNamesBothLengths) {
  try {
    UpsampleIndex({10, 11, 12, 13}, {2, 1});
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kShape);
    const std::string msg = e.what();
    EXPECT_NE(msg.find('3'), std::string::npos);
    EXPECT_NE(msg.find('4'), std::string::npos);
  }
}

TEST_F(FrontendTest, UpsampleIsNonDecreasingOverCorpus) {
  for (const auto& s : *corpus_) {
    const auto sk = lingdata::G2pGold(s, *lex_, *inv_);
    const auto index = UpsampleIndex(sk.phoneme_ids, sk.char_spans);
    ASSERT_EQ(index.size(), sk.phoneme_ids.size());
    EXPECT_TRUE(std::is_sorted(index.begin(), index.end()));
    EXPECT_EQ(index.back() + 1, static_cast<nn::Index>(s.size()));
  }
}

TEST(CombineLayer, ZeroWeightsGiveZeros) {
  Rng rng(9);
  CombineLayer<float> combine(16, 256, 256, 3, rng);
  combine.conv().weight.mutable_value().setZero();
  combine.conv().bias.mutable_value().setZero();
  const nn::Tensor<float> chars(nn::Matrix<float>::Random(2, 16));
  const nn::Tensor<float> phones(nn::Matrix<float>::Random(3, 256));
  const auto out = combine.Forward(chars, phones, {0, 0, 1}, nn::SeqLayout::Single(3));
  EXPECT_EQ(out.rows(), 3);
  EXPECT_EQ(out.cols(), 256);
  EXPECT_TRUE(out.value().isZero(0));
}

TEST(CombineLayer, OutputWidthIndependentOfCharWidth) {
  for (int char_hidden : {8, 48, 128}) {
    Rng rng(10);
    CombineLayer<float> combine(char_hidden, 256, 256, 3, rng);
    const nn::Tensor<float> chars(nn::Matrix<float>::Random(2, char_hidden));
    const nn::Tensor<float> phones(nn::Matrix<float>::Random(4, 256));
    const auto out = combine.Forward(chars, phones, {0, 0, 1, 1}, nn::SeqLayout::Single(4));
    EXPECT_EQ(out.cols(), 256);
  }
}

TEST_F(FrontendTest, FrontFeaturesShapes) {
  Rng rng(11);
  CharEncoder<float> enc(SmallConfig(), rng);
  const nn::Embedding<float> table(inv_->size(), 256, rng);
  const CombineLayer<float> combine(16, 256, 256, 3, rng);
  const auto& s = corpus_->front();
  const auto sk = lingdata::G2pGold(s, *lex_, *inv_);
  const FrontendOutput out =
      FrontFeatures(enc, *vocab_, s.chars, sk.phoneme_ids, sk.char_spans, table, combine);
  EXPECT_EQ(out.char_embeddings.rows(), static_cast<nn::Index>(s.size()));
  EXPECT_EQ(out.char_embeddings.cols(), 16);
  EXPECT_EQ(out.combined.rows(), static_cast<nn::Index>(sk.phoneme_ids.size()));
  EXPECT_EQ(out.combined.cols(), 256);
}

TEST_F(FrontendTest, EmptyTaskSetIsNoOp) {
  Rng rng(12);
  CharEncoder<float> enc(SmallConfig(), rng);
  const auto before = Snapshot(enc.Params());
  const auto data = MakeExamples(*corpus_, *vocab_, *lex_, {});
  const FinetuneReport report = Finetune(enc, data, {}, {}, SmallTrain(5), 1);
  EXPECT_EQ(report.steps, 0);
  const auto after = Snapshot(enc.Params());
  ASSERT_EQ(before.size(), after.size());
  for (size_t i = 0; i < before.size(); ++i) EXPECT_EQ(before[i], after[i]);
}

TEST_F(FrontendTest, ZeroWeightsLeaveParametersUnchanged) {
  const std::set<Task> all(std::begin(kAllTasks), std::end(kAllTasks));
  Rng rng(13);
  CharEncoder<float> enc(SmallConfig(all), rng);
  const auto before = Snapshot(enc.Params());
  const auto data = MakeExamples(*corpus_, *vocab_, *lex_, all);
  TaskWeights w;
  for (Task t : all) w.weights[t] = 0.0;
  const FinetuneReport report = Finetune(enc, data, all, w, SmallTrain(6), 2);
  EXPECT_EQ(report.steps, 6);
  const auto after = Snapshot(enc.Params());
  for (size_t i = 0; i < before.size(); ++i) EXPECT_EQ(before[i], after[i]);
}

TEST_F(FrontendTest, MultiTaskLossesDecrease) {
  const std::set<Task> all(std::begin(kAllTasks), std::end(kAllTasks));
  Rng rng(14);
  CharEncoder<float> enc(SmallConfig(), rng);
  const auto data = MakeExamples(*corpus_, *vocab_, *lex_, all);
  TrainConfig cfg = SmallTrain(150);
  cfg.log_every = 25;
  cfg.optimizer.lr_scale = 0.3;
  const FinetuneReport report = Finetune(enc, data, all, {}, cfg, 3);
  for (Task t : all) {
    ASSERT_TRUE(enc.HasHead(t));
    const auto& curve = report.task_losses.at(t);
    EXPECT_LT(curve.last(), curve.first()) << TaskName(t);
  }
}

TEST_F(FrontendTest, TaskWithoutLabelsIsRejected) {
  lingdata::AnnotatedSentence s = corpus_->front();
  s.prosody.clear();
  EXPECT_THROW(MakeExample(s, *vocab_, *lex_, {Task::kProsody}), Error);
  EXPECT_NO_THROW(MakeExample(s, *vocab_, *lex_, {Task::kSegPos}));
}

TEST_F(FrontendTest, SingleAndMultiTaskDifferOnlyByHeads) {
  Rng a(15), b(15);
  CharEncoder<float> single(SmallConfig({Task::kPolyphone}), a);
  CharEncoder<float> multi(
      SmallConfig({Task::kPolyphone, Task::kSegPos, Task::kProsody}), b);
  std::set<std::string> ns, nm;
  for (const auto& p : single.Params()) ns.insert(p.name);
  for (const auto& p : multi.Params()) nm.insert(p.name);
  std::vector<std::string> extra;
  std::set_difference(nm.begin(), nm.end(), ns.begin(), ns.end(), std::back_inserter(extra));
  EXPECT_EQ(extra, (std::vector<std::string>{"head.prosody.weight", "head.seg_pos.weight"}));
  const auto ps = single.Params();
  const auto pm = multi.Params();
  for (const auto& p : ps) {
    if (p.name.rfind("head.", 0) == 0) continue;
    EXPECT_EQ(p.tensor.value(), pm.Find(p.name)->tensor.value()) << p.name;
  }
}

TEST_F(FrontendTest, G2pWithoutPolyphonesIgnoresEncoder) {
  const auto* s = FindSentence(false);
  ASSERT_NE(s, nullptr);
  const std::set<Task> all(std::begin(kAllTasks), std::end(kAllTasks));
  Rng a(16), b(17);
  CharEncoder<float> e1(SmallConfig(all), a);
  CharEncoder<float> e2(SmallConfig(all), b);
  const auto r1 = G2p(e1, *vocab_, s->chars, *lex_, *inv_, &s->prosody);
  const auto r2 = G2p(e2, *vocab_, s->chars, *lex_, *inv_, &s->prosody);
  EXPECT_EQ(r1.skeleton, r2.skeleton);
  EXPECT_EQ(r1.skeleton, lingdata::G2pGold(*s, *lex_, *inv_));
}

TEST_F(FrontendTest, G2pFollowsPredictedProsodyWithoutGold) {
  const auto* s = FindSentence(true);
  ASSERT_NE(s, nullptr);
  const std::set<Task> all(std::begin(kAllTasks), std::end(kAllTasks));
  Rng rng(18);
  CharEncoder<float> enc(SmallConfig(all), rng);
  const auto r = G2p(enc, *vocab_, s->chars, *lex_, *inv_);
  const auto predicted = PredictTags(enc, vocab_->Encode(s->chars), Task::kProsody);
  ASSERT_EQ(r.prosody.size(), predicted.size());
  for (size_t i = 0; i < predicted.size(); ++i) {
    EXPECT_EQ(static_cast<int>(r.prosody[i]), predicted[i]);
  }
  int sp = 0;
  for (size_t i = 0; i + 1 < r.prosody.size(); ++i) sp += r.prosody[i] >= Boundary::kPPH;
  EXPECT_EQ(std::count(r.skeleton.phoneme_ids.begin(), r.skeleton.phoneme_ids.end(),
                       lingdata::PhonemeInventory::kSp),
            sp);
}

TEST_F(FrontendTest, G2pUnknownCharacterIsNamed) {
  Rng rng(19);
  CharEncoder<float> enc(SmallConfig({Task::kPolyphone, Task::kProsody}), rng);
  std::vector<std::string> chars = corpus_->front().chars;
  chars.insert(chars.begin() + 1, "Q");
  try {
    G2p(enc, *vocab_, chars, *lex_, *inv_);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("'Q' at position 1"), std::string::npos);
  }
}

TEST_F(FrontendTest, CheckpointRoundTripKeepsHeads) {
  Rng rng(20);
  CharEncoder<float> enc(SmallConfig({Task::kPolyphone, Task::kProsody}), rng);
  const auto dir = std::filesystem::temp_directory_path() / "prosody_frontend_ckpt_test";
  std::filesystem::remove_all(dir);
  SaveCharEncoder(dir, enc, *vocab_);
  const LoadedCharEncoder loaded = LoadCharEncoder(dir);
  EXPECT_EQ(loaded.encoder.config().tasks, enc.config().tasks);
  EXPECT_EQ(loaded.vocab.size(), vocab_->size());
  const auto ids = vocab_->Encode(corpus_->front().chars);
  EXPECT_EQ(PredictTags(loaded.encoder, ids, Task::kProsody),
            PredictTags(enc, ids, Task::kProsody));
  EXPECT_EQ(CharEmbeddings(loaded.encoder, ids), CharEmbeddings(enc, ids));
  std::filesystem::remove_all(dir);
}

TEST(CharEncoder, GradientCheckWidth16AllHeads) {
  CharEncoderConfig c;
  c.vocab_size = 9;
  c.hidden = 16;
  c.blocks = 2;
  c.heads = 2;
  c.conv_filter = 24;
  c.conv_kernel = 3;
  c.dropout = 0.0;
  c.polyphone_labels = 3;
  c.seg_pos_labels = 4;
  c.tasks = {Task::kPolyphone, Task::kSegPos, Task::kProsody};
  Rng rng(21);
  CharEncoder<double> enc(c, rng);
  const std::vector<int> ids{2, 3, 1, 4, 8, 5, 6};
  const nn::SeqLayout layout({4, 3});
  const std::vector<bool> all(ids.size(), true);
  auto loss = [&] {
    const auto h = enc.Encode(ids, layout, {});
    std::vector<nn::Tensor<double>> terms{
        nn::SoftmaxCrossEntropy(enc.MlmLogits(h), {2, 3, 4, 4, 8, 5, 6}, all).value,
        nn::SoftmaxCrossEntropy(enc.HeadLogits(h, Task::kPolyphone), {0, 1, 2, 0, 1, 2, 0},
                                all).value,
        nn::SoftmaxCrossEntropy(enc.HeadLogits(h, Task::kSegPos), {0, 1, 2, 3, 0, 1, 0}, all)
            .value,
        nn::SoftmaxCrossEntropy(enc.HeadLogits(h, Task::kProsody), {0, 1, 2, 3, 1, 0, 3}, all)
            .value};
    return nn::WeightedSum<double>(terms, {1.0, 1.0, 1.0, 1.0});
  };
  const auto res = testing::CheckGradients(testing::AsList(enc.Params()), loss);
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

TEST(Tasks, ParseAndJoinRoundTrip) {
  const auto tasks = ParseTasks("prosody,polyphone");
  EXPECT_EQ(tasks, (std::set<Task>{Task::kPolyphone, Task::kProsody}));
  EXPECT_EQ(ParseTasks(JoinTasks(tasks)), tasks);
  EXPECT_THROW(ParseTask("pos"), Error);
}

}  // namespace
}  // namespace prosody::frontend

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

#include <cmath>
#include <filesystem>

#include "gtest/gtest.h"

#include "gradcheck.h"
#include "prosody/acoustic/model.h"
#include "prosody/acoustic/training.h"
#include "prosody/common/error.h"
#include "prosody/lingdata/mel.h"

namespace prosody::acoustic {
namespace {

using nn::Matrix;
using nn::SeqLayout;

// Naive expansion, item by item.
Matrix<double> NaiveRegulate(const Matrix<double>& h, const std::vector<int>& d) {
  long frames = 0;
  for (int x : d) frames += x;
  Matrix<double> out(frames, h.cols());
  long r = 0;
  for (size_t i = 0; i < d.size(); ++i) {
    for (int k = 0; k < d[i]; ++k) out.row(r++) = h.row(static_cast<Index>(i));
  }
  return out;
}

TEST(LengthRegulate, DefinitionExample) {
  Matrix<double> h(2, 2);
  h << 1, 2, 3, 4;
  SeqLayout frames;
  const auto out =
      LengthRegulate(nn::Tensor<double>(h), {2, 3}, SeqLayout::Single(2), &frames).value();
  Matrix<double> want(5, 2);
  want << 1, 2, 1, 2, 3, 4, 3, 4, 3, 4;
  EXPECT_EQ(out, want);
  EXPECT_EQ(frames.total(), 5);
}

TEST(LengthRegulate, UnitDurationsAreIdentity) {
  const Matrix<double> h = Matrix<double>::Random(6, 3);
  const auto out = LengthRegulate(nn::Tensor<double>(h), std::vector<int>(6, 1),
                                  SeqLayout({4, 2}), nullptr)
                       .value();
  EXPECT_EQ(out, h);
}

TEST(LengthRegulate, MatchesNaiveOracleOnRandomCases) {
  Rng rng(77);
  for (int trial = 0; trial < 1000; ++trial) {
    const int items = UniformInt(rng, 1, 3);
    std::vector<Index> lengths;
    std::vector<int> durations;
    for (int b = 0; b < items; ++b) {
      const int len = UniformInt(rng, 1, 6);
      lengths.push_back(len);
      std::vector<int> d(len);
      for (int& x : d) x = UniformInt(rng, 0, 4);
      if (std::all_of(d.begin(), d.end(), [](int x) { return x == 0; })) d[0] = 1;
      durations.insert(durations.end(), d.begin(), d.end());
    }
    const SeqLayout layout(lengths);
    const Matrix<double> h = Matrix<double>::Random(layout.total(), 2);
    SeqLayout frames;
    const auto out = LengthRegulate(nn::Tensor<double>(h), durations, layout, &frames).value();
    ASSERT_EQ(out, NaiveRegulate(h, durations)) << "trial " << trial;
    long total = 0;
    for (int b = 0; b < items; ++b) {
      long sum = 0;
      for (Index t = 0; t < layout.length(b); ++t) sum += durations[layout.offset(b) + t];
      EXPECT_EQ(frames.length(b), sum);
      total += sum;
    }
    EXPECT_EQ(out.rows(), total);
  }
}

TEST(LengthRegulate, ConcatenationOfSplits) {
  Rng rng(78);
  const Matrix<double> h = Matrix<double>::Random(7, 3);
  std::vector<int> d(7);
  for (int& x : d) x = UniformInt(rng, 1, 3);
  const auto whole =
      LengthRegulate(nn::Tensor<double>(h), d, SeqLayout::Single(7), nullptr).value();
  const std::vector<int> d1(d.begin(), d.begin() + 3), d2(d.begin() + 3, d.end());
  const auto a = LengthRegulate(nn::Tensor<double>(Matrix<double>(h.topRows(3))), d1,
                                SeqLayout::Single(3), nullptr)
                     .value();
  const auto b = LengthRegulate(nn::Tensor<double>(Matrix<double>(h.bottomRows(4))), d2,
                                SeqLayout::Single(4), nullptr)
                     .value();
  Matrix<double> joined(a.rows() + b.rows(), 3);
  joined << a, b;
  EXPECT_EQ(whole, joined);
}

TEST(LengthRegulate, AllZeroItemIsRejected) {
  EXPECT_THROW(LengthRegulateIndex({1, 2, 0, 0}, SeqLayout({2, 2}), nullptr), Error);
  EXPECT_NO_THROW(LengthRegulateIndex({1, 0, 0, 1}, SeqLayout({2, 2}), nullptr));
}

TEST(DecodeDurations, RoundClampRule) {
  Matrix<float> x(1, 5);
  x << std::log(0.2f), std::log(2.6f), std::log(2.4f), 0.0f, -30.0f;
  EXPECT_EQ(DecodeDurations(x), (std::vector<int>{1, 3, 2, 1, 1}));
}

AcousticConfig TinyConfig(bool frontend) {
  AcousticConfig c;
  c.phoneme_vocab = 12;
  c.hidden = 16;
  c.encoder_blocks = 2;
  c.decoder_blocks = 2;
  c.heads = 2;
  c.conv_filter = 24;
  c.conv_kernel = 3;
  c.dropout = 0.0;
  c.duration_filter = 16;
  c.duration_kernel = 3;
  c.mel_dims = 5;
  c.use_frontend = frontend;
  c.char_hidden = 6;
  return c;
}

// Two items of two characters each; the first has an SP.
std::vector<TtsExample> TinyExamples(int mel_dims, int char_hidden, uint64_t seed) {
  Rng rng(seed);
  std::vector<TtsExample> out(2);
  out[0].sample = {{4, 5, 2, 6, 7, 3}, {2, 1, 3, 2, 1, 2}, {2, 1, 2, 1}};
  out[1].sample = {{8, 9, 10, 3}, {1, 2, 2, 3}, {1, 2, 1}};
  for (auto& ex : out) {
    ex.mel = nn::NormalInit<float>(ex.sample.TotalFrames(), mel_dims, 1.0, rng);
    ex.char_embeddings = nn::NormalInit<float>(2, char_hidden, 1.0, rng);
  }
  return out;
}

std::vector<const TtsExample*> Ptrs(const std::vector<TtsExample>& v) {
  std::vector<const TtsExample*> out;
  for (const auto& e : v) out.push_back(&e);
  return out;
}

TEST(AcousticModel, GradientCheckWidth16WithFrontend) {
  const AcousticConfig cfg = TinyConfig(true);
  Rng rng(5);
  AcousticModel<double> model(cfg, rng);
  const auto data = TinyExamples(cfg.mel_dims, cfg.char_hidden, 6);
  const auto batch = MakeBatch<double>(Ptrs(data), true);
  Rng probe_rng(7);
  const Matrix<double> p_dur =
      nn::NormalInit<double>(batch.phone_layout.total(), 1, 1.0, probe_rng);
  const Matrix<double> p_mel =
      nn::NormalInit<double>(batch.frame_layout.total(), cfg.mel_dims, 1.0, probe_rng);
  auto loss = [&] {
    const nn::ForwardContext ctx;
    const auto hidden = model.Encode(batch, ctx);
    const auto dur = model.PredictDurations(hidden, batch.phone_layout, ctx);
    SeqLayout frames;
    const auto mel =
        model.Decode(LengthRegulate(hidden, batch.durations, batch.phone_layout, &frames),
                     frames, ctx);
    return nn::WeightedSum<double>({nn::InnerProduct(dur, p_dur), nn::InnerProduct(mel, p_mel)},
                                   {1.0, 1.0});
  };
  const auto res = testing::CheckGradients(testing::AsList(model.Params()), loss);
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

TEST(AcousticModel, GradientCheckOfTrainingLoss) {
  const AcousticConfig cfg = TinyConfig(false);
  Rng rng(8);
  AcousticModel<double> model(cfg, rng);
  const auto data = TinyExamples(cfg.mel_dims, cfg.char_hidden, 9);
  const auto batch = MakeBatch<double>(Ptrs(data), false);
  const auto res = testing::CheckGradients(testing::AsList(model.Params()),
                                           [&] { return model.Losses(batch, {}).total; });
  EXPECT_LT(res.max_rel_error, 1e-4) << res.worst;
}

TEST(AcousticModel, MelLossHasZeroGradientOnDurationPredictor) {
  const AcousticConfig cfg = TinyConfig(true);
  Rng rng(10);
  AcousticModel<double> model(cfg, rng);
  const auto data = TinyExamples(cfg.mel_dims, cfg.char_hidden, 11);
  const auto batch = MakeBatch<double>(Ptrs(data), true);
  auto params = model.Params();
  params.ZeroGrad();
  model.Losses(batch, {}).mel.value.Backward();
  int checked = 0;
  for (const auto& p : params) {
    if (p.name.rfind("duration.", 0) != 0) continue;
    ++checked;
    const auto& g = p.tensor.grad();
    EXPECT_TRUE(g.size() == 0 || g.isZero(0)) << p.name;
  }
  EXPECT_GT(checked, 0);
  // The encoder does receive mel gradient.
  EXPECT_GT(params.Find("embedding.table")->tensor.grad().norm(), 0.0);
}

TEST(AcousticModel, BatchItemsDoNotInteract) {
  const AcousticConfig cfg = TinyConfig(false);
  Rng rng(12);
  AcousticModel<float> model(cfg, rng);
  auto data = TinyExamples(cfg.mel_dims, cfg.char_hidden, 13);
  const nn::ForwardContext ctx;
  const auto both = MakeBatch<float>(Ptrs(data), false);
  const auto alone = MakeBatch<float>({&data[0]}, false);
  const auto hb = model.Encode(both, ctx).value();
  const auto ha = model.Encode(alone, ctx).value();
  EXPECT_TRUE(hb.topRows(ha.rows()).isApprox(ha, 1e-6f));
  data[1].sample.phoneme_ids = {9, 9, 9, 3};
  const auto changed = model.Encode(MakeBatch<float>(Ptrs(data), false), ctx).value();
  EXPECT_TRUE(changed.topRows(ha.rows()).isApprox(hb.topRows(ha.rows()), 1e-6f));
}

TEST(AcousticModel, EncodeShapesAndInterchangeableInputs) {
  AcousticConfig cfg = TinyConfig(false);
  cfg.hidden = 256;
  cfg.conv_filter = 64;
  Rng rng(14);
  AcousticModel<float> plain(cfg, rng);
  cfg.use_frontend = true;
  AcousticModel<float> combined(cfg, rng);
  TtsExample ex;
  ex.sample = {{4, 5, 6, 7, 3}, {}, {2, 2, 1}};
  ex.char_embeddings = Matrix<float>::Random(2, cfg.char_hidden);
  const auto hp = plain.Encode(MakeBatch<float>({&ex}, false), {});
  const auto hc = combined.Encode(MakeBatch<float>({&ex}, true), {});
  EXPECT_EQ(hp.rows(), 5);
  EXPECT_EQ(hp.cols(), 256);
  EXPECT_EQ(hc.rows(), hp.rows());
  EXPECT_EQ(hc.cols(), hp.cols());
}

TEST(AcousticModel, ZeroMelLinearGivesMeanAbsTarget) {
  const AcousticConfig cfg = TinyConfig(false);
  Rng rng(15);
  AcousticModel<float> model(cfg, rng);
  model.mel_linear().weight.mutable_value().setZero();
  model.mel_linear().bias.mutable_value().setZero();
  const auto data = TinyExamples(cfg.mel_dims, cfg.char_hidden, 16);
  const auto batch = MakeBatch<float>(Ptrs(data), false);
  const double mean_abs = batch.mel.cwiseAbs().mean();
  EXPECT_NEAR(model.Losses(batch, {}).mel.item(), mean_abs, 1e-6);
}

TEST(AcousticModel, DurationLossIsLogDomainMae) {
  const AcousticConfig cfg = TinyConfig(false);
  Rng rng(17);
  AcousticModel<float> model(cfg, rng);
  const auto data = TinyExamples(cfg.mel_dims, cfg.char_hidden, 18);
  const auto batch = MakeBatch<float>(Ptrs(data), false);
  const auto pred = model.PredictDurations(model.Encode(batch, {}), batch.phone_layout, {}).value();
  double want = 0;
  for (Index i = 0; i < pred.rows(); ++i) {
    want += std::abs(pred(i, 0) - std::log(static_cast<double>(batch.durations[i])));
  }
  want /= pred.rows();
  EXPECT_NEAR(model.Losses(batch, {}).dur.item(), want, 1e-5);
}

TEST(AcousticModel, NonFiniteLossAbortsWithStep) {
  const AcousticConfig cfg = TinyConfig(false);
  Rng rng(19);
  AcousticModel<float> model(cfg, rng);
  model.mel_linear().bias.mutable_value()(0, 0) = std::nanf("");
  const auto data = TinyExamples(cfg.mel_dims, cfg.char_hidden, 20);
  nn::Adam<float> opt(model.Params(), {});
  Rng drop(1);
  try {
    TrainStep(model, MakeBatch<float>(Ptrs(data), false), opt, drop);
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kNumeric);
    EXPECT_NE(std::string(e.what()).find("step 1"), std::string::npos);
  }
}

class AcousticTrainingTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const auto spec = lingdata::CorpusSpec::Default();
    const auto lex = spec.BuildLexicon();
    inv_ = new lingdata::PhonemeInventory(
        lingdata::PhonemeInventory::Build(lingdata::InventoryConfig::Mandarin()));
    const auto sig = lingdata::MelSignatures::Build(*inv_, 3);
    data_ = new std::vector<TtsExample>(BuildTtsExamples(
        lingdata::GenerateCorpus(spec, 24, 4).sentences, spec, lex, *inv_, sig, 5));
  }
  static void TearDownTestSuite() {
    delete inv_;
    delete data_;
  }

  static AcousticConfig Config() {
    AcousticConfig c = TinyConfig(false);
    c.phoneme_vocab = inv_->size();
    c.mel_dims = lingdata::kMelDims;
    c.dropout = 0.1;
    return c;
  }
  static TtsTrainConfig Train(int steps) {
    TtsTrainConfig t;
    t.steps = steps;
    t.batch_size = 4;
    t.log_every = 10;
    t.eval_every = 10;
    t.optimizer.warmup_steps = 20;
    t.optimizer.model_width = 16;
    t.optimizer.lr_scale = 0.3;
    return t;
  }

  static lingdata::PhonemeInventory* inv_;
  static std::vector<TtsExample>* data_;
};

lingdata::PhonemeInventory* AcousticTrainingTest::inv_ = nullptr;
std::vector<TtsExample>* AcousticTrainingTest::data_ = nullptr;

TEST_F(AcousticTrainingTest, MelFramesMatchDurations) {
  for (const auto& ex : *data_) EXPECT_EQ(ex.mel.rows(), ex.sample.TotalFrames());
}

TEST_F(AcousticTrainingTest, TrainingIsDeterministicAndReducesLoss) {
  Rng r1(30), r2(30);
  AcousticModel<float> m1(Config(), r1), m2(Config(), r2);
  const auto a = TrainTts(m1, *data_, *data_, Train(60), 31);
  const auto b = TrainTts(m2, *data_, *data_, Train(60), 31);
  EXPECT_EQ(a.total.points, b.total.points);
  EXPECT_EQ(a.heldout_dur_mae, b.heldout_dur_mae);
  EXPECT_LT(a.total.last(), a.first_step.total);
  ASSERT_EQ(a.heldout_dur_mae.size(), 6u);
  EXPECT_EQ(a.StepsToReach(1e9), 10);
  EXPECT_EQ(a.StepsToReach(-1), -1);
}

TEST_F(AcousticTrainingTest, SynthesizeIsDeterministicAndLengthConsistent) {
  Rng rng(32);
  AcousticModel<float> model(Config(), rng);
  const auto& ex = data_->front();
  const Synthesis s1 = Synthesize(model, ex);
  const Synthesis s2 = Synthesize(model, ex);
  EXPECT_EQ(s1.mel, s2.mel);
  EXPECT_EQ(s1.durations, s2.durations);
  long sum = 0;
  for (int d : s1.durations) {
    EXPECT_GE(d, 1);
    sum += d;
  }
  EXPECT_EQ(s1.mel.rows(), sum);
  EXPECT_EQ(s1.mel.cols(), lingdata::kMelDims);
  EXPECT_EQ(s1.durations.size(), ex.sample.phoneme_ids.size());
  TtsExample empty;
  EXPECT_THROW(Synthesize(model, empty), Error);
}

TEST_F(AcousticTrainingTest, CheckpointRoundTrip) {
  Rng rng(33);
  AcousticModel<float> model(Config(), rng);
  const auto dir = std::filesystem::temp_directory_path() / "prosody_acoustic_ckpt_test";
  std::filesystem::remove_all(dir);
  SaveAcoustic(dir, model, {{"system", "base"}});
  const AcousticModel<float> loaded = LoadAcoustic(dir);
  EXPECT_EQ(Synthesize(loaded, data_->front()).mel, Synthesize(model, data_->front()).mel);
  EXPECT_EQ(nn::Checkpoint::Load(dir).tags.at("system"), "base");
  std::filesystem::remove_all(dir);
}

}  // namespace
}  // namespace prosody::acoustic

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
#include "prosody/nn/layers.h"
#include "prosody/nn/loss.h"
#include "prosody/nn/ops.h"
#include "prosody/nn/optim.h"

namespace prosody::nn {
namespace {

using testing::CheckGradients;
using D = double;

Matrix<D> RandomMatrix(Index r, Index c, uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  return NormalInit<D>(r, c, scale, rng);
}

Tensor<D> Leaf(Index r, Index c, uint64_t seed, double scale = 1.0) {
  return Tensor<D>(RandomMatrix(r, c, seed, scale), true);
}

constexpr double kTol = 1e-4;

TEST(GradCheck, AffineAndMatMul) {
  auto x = Leaf(5, 4, 1);
  auto w = Leaf(4, 3, 2);
  auto b = Leaf(1, 3, 3);
  auto w2 = Leaf(3, 2, 4);
  const Matrix<D> probe = RandomMatrix(5, 2, 5);
  auto res = CheckGradients({{"x", x}, {"w", w}, {"b", b}, {"w2", w2}}, [&] {
    return InnerProduct(MatMul(Affine(x, w, b), w2), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, ReluAddScaleConcat) {
  auto a = Leaf(6, 3, 11);
  auto b = Leaf(6, 3, 12);
  auto c = Leaf(6, 2, 13);
  const Matrix<D> probe = RandomMatrix(6, 5, 14);
  auto res = CheckGradients({{"a", a}, {"b", b}, {"c", c}}, [&] {
    return InnerProduct(ConcatCols(Relu(Add(a, Scale(b, 0.5))), c), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, LayerNorm) {
  auto x = Leaf(4, 8, 21);
  auto g = Leaf(1, 8, 22);
  auto b = Leaf(1, 8, 23);
  const Matrix<D> probe = RandomMatrix(4, 8, 24);
  auto res = CheckGradients({{"x", x}, {"gamma", g}, {"beta", b}}, [&] {
    return InnerProduct(LayerNorm(x, g, b), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, Conv1dRespectsSequenceEdges) {
  SeqLayout layout({4, 1, 3});
  auto x = Leaf(8, 3, 31);
  auto w = Leaf(3 * 5, 2, 32);
  auto b = Leaf(1, 2, 33);
  const Matrix<D> probe = RandomMatrix(8, 2, 34);
  auto res = CheckGradients({{"x", x}, {"w", w}, {"b", b}}, [&] {
    return InnerProduct(Conv1d(x, w, b, layout, 5), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, SelfAttention) {
  SeqLayout layout({3, 5});
  auto qkv = Leaf(8, 12, 41);
  const Matrix<D> probe = RandomMatrix(8, 4, 42);
  auto res = CheckGradients({{"qkv", qkv}}, [&] {
    return InnerProduct(SelfAttention(qkv, layout, 2), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, EmbeddingGather) {
  auto table = Leaf(6, 4, 51);
  const std::vector<Index> ids{0, 3, 3, 5, 1};
  const Matrix<D> probe = RandomMatrix(5, 4, 52);
  auto res = CheckGradients({{"table", table}}, [&] {
    return InnerProduct(GatherRows(table, ids), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, SoftmaxAndCrossEntropy) {
  auto logits = Leaf(5, 4, 61);
  const Matrix<D> probe = RandomMatrix(5, 4, 62);
  auto res = CheckGradients({{"logits", logits}}, [&] {
    return InnerProduct(SoftmaxRows(logits), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
  const std::vector<int> labels{0, 1, 2, 3, 1};
  const std::vector<bool> mask{true, false, true, true, false};
  res = CheckGradients({{"logits", logits}}, [&] {
    return SoftmaxCrossEntropy(logits, labels, mask).value;
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, MaskedMaeAwayFromKinks) {
  auto pred = Leaf(4, 3, 71);
  Matrix<D> target = pred.value();
  target.array() += 0.5;  // every residual far from zero
  target(1, 2) -= 1.2;
  const std::vector<bool> mask{true, true, false, true};
  auto res = CheckGradients({{"pred", pred}}, [&] {
    return MaskedMae(pred, target, mask).value;
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, DropoutWithReplayedMask) {
  auto x = Leaf(5, 6, 81);
  const Matrix<D> probe = RandomMatrix(5, 6, 82);
  auto res = CheckGradients({{"x", x}}, [&] {
    Rng rng(7);  // identical mask on every evaluation
    return InnerProduct(Dropout(x, 0.3, &rng), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

FFTBlockConfig SmallBlock() {
  FFTBlockConfig cfg;
  cfg.hidden = 16;
  cfg.heads = 2;
  cfg.conv_filter = 24;
  cfg.conv_kernel = 3;
  cfg.dropout = 0.0;
  return cfg;
}

TEST(GradCheck, FFTBlockWidth16) {
  Rng rng(91);
  FFTBlock<D> block(SmallBlock(), rng);
  ParamList<D> params;
  block.Collect("block", params);
  SeqLayout layout({4, 3});
  auto x = Leaf(7, 16, 92);
  const Matrix<D> probe = RandomMatrix(7, 16, 93);
  auto wrt = testing::AsList(params);
  wrt.push_back({"x", x});
  auto res = CheckGradients(wrt, [&] {
    return InnerProduct(block.Forward(x, layout, {}), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(GradCheck, FFTStackWidth16) {
  Rng rng(101);
  FFTStack<D> stack(2, SmallBlock(), rng);
  ParamList<D> params;
  stack.Collect("stack", params);
  SeqLayout layout({5});
  auto x = Leaf(5, 16, 102);
  const Matrix<D> probe = RandomMatrix(5, 16, 103);
  auto res = CheckGradients(testing::AsList(params), [&] {
    return InnerProduct(stack.Forward(x, layout, {}), probe);
  });
  EXPECT_LT(res.max_rel_error, kTol) << res.worst;
}

TEST(FFTBlock, PreservesShape) {
  Rng rng(1);
  FFTBlockConfig cfg;  // hidden 256
  cfg.conv_filter = 256;
  FFTBlock<float> block(cfg, rng);
  PaddedBatch<float> batch;
  for (int b = 0; b < 2; ++b) {
    Rng r(10 + b);
    batch.items.push_back(NormalInit<float>(7, 256, 1.0, r));
    batch.padding.push_back(std::vector<bool>(7, false));
  }
  auto [packed, layout] = Pack(batch);
  Tensor<float> out = block.Forward(Tensor<float>(packed), layout, {});
  auto unpacked = Unpack(out.value(), layout, batch.padding);
  ASSERT_EQ(unpacked.items.size(), 2u);
  for (const auto& item : unpacked.items) {
    EXPECT_EQ(item.rows(), 7);
    EXPECT_EQ(item.cols(), 256);
  }
}

TEST(FFTBlock, PaddingHasNoInfluence) {
  Rng rng(2);
  FFTBlockConfig cfg = SmallBlock();
  FFTBlock<float> block(cfg, rng);
  PaddedBatch<float> batch;
  Rng data(3);
  batch.items.push_back(NormalInit<float>(6, 16, 1.0, data));
  batch.items.push_back(NormalInit<float>(6, 16, 1.0, data));
  batch.padding.push_back({false, false, false, false, true, true});
  batch.padding.push_back({false, false, false, false, false, false});

  auto run = [&](const PaddedBatch<float>& in) {
    auto [packed, layout] = Pack(in);
    auto out = block.Forward(Tensor<float>(packed), layout, {});
    return Unpack(out.value(), layout, in.padding);
  };
  auto before = run(batch);
  batch.items[0].row(4).setConstant(1e3f);
  batch.items[0].row(5).setConstant(-7.0f);
  auto after = run(batch);
  for (int b = 0; b < 2; ++b) {
    for (int t = 0; t < 6; ++t) {
      if (batch.padding[b][t]) continue;
      EXPECT_LT((before.items[b].row(t) - after.items[b].row(t)).cwiseAbs().maxCoeff(),
                1e-6f);
    }
  }
}

TEST(FFTBlock, RejectsWidthMismatch) {
  Rng rng(4);
  FFTBlock<float> block(SmallBlock(), rng);
  Tensor<float> x(Matrix<float>::Zero(3, 8));
  EXPECT_THROW(block.Forward(x, SeqLayout::Single(3), {}), Error);
}

TEST(SoftmaxHead, ZeroWeightsGiveUniform) {
  Tensor<double> h(RandomMatrix(4, 5, 1));
  Tensor<double> w(Matrix<D>::Zero(5, 3));
  auto p = SoftmaxHead(h, w).value();
  EXPECT_TRUE(p.isApproxToConstant(1.0 / 3.0, 1e-12));
}

TEST(SoftmaxHead, RowsAreDistributions) {
  Tensor<double> h(RandomMatrix(6, 5, 2, 3.0));
  Tensor<double> w(RandomMatrix(5, 7, 3, 2.0));
  auto p = SoftmaxHead(h, w).value();
  for (Index r = 0; r < p.rows(); ++r) {
    EXPECT_NEAR(p.row(r).sum(), 1.0, 1e-6);
    EXPECT_GE(p.row(r).minCoeff(), 0.0);
  }
}

TEST(SoftmaxHead, ClosedFormTwoClass) {
  // Identity pass-through: W = I, h = logits.
  Matrix<D> logits(1, 2);
  logits << 2.0, 0.0;
  auto p = SoftmaxHead(Tensor<D>(logits), Tensor<D>(Matrix<D>::Identity(2, 2))).value();
  const double e2 = std::exp(2.0);
  EXPECT_NEAR(p(0, 0), e2 / (e2 + 1.0), 1e-6);
  EXPECT_NEAR(p(0, 1), 1.0 / (e2 + 1.0), 1e-6);
}

TEST(NoamSchedule, CrossoverAtWarmup) {
  const double lr = NoamLearningRate(4000, 4000, 256);
  EXPECT_NEAR(lr, std::pow(256.0, -0.5) * std::pow(4000.0, -0.5), 1e-12);
}

TEST(NoamSchedule, MonotoneBranches) {
  for (long s = 1; s < 400; ++s) {
    EXPECT_LT(NoamLearningRate(s, 400, 64), NoamLearningRate(s + 1, 400, 64));
  }
  for (long s = 400; s < 2000; ++s) {
    EXPECT_GT(NoamLearningRate(s, 400, 64), NoamLearningRate(s + 1, 400, 64));
  }
}

TEST(NoamSchedule, EarlyWarmupValue) {
  // 256^-0.5 * 100 * 4000^-1.5
  EXPECT_NEAR(NoamLearningRate(100, 4000, 256), 2.4705e-5, 1e-8);
}

TEST(NoamSchedule, RejectsStepZero) {
  EXPECT_THROW(NoamLearningRate(0, 4000, 256), Error);
}

TEST(Losses, MaeHandCases) {
  Matrix<D> pred(2, 1), target(2, 1);
  pred << 1, 3;
  target << 2, 1;
  auto l = MaskedMae(Tensor<D>(pred), target, {true, true});
  EXPECT_NEAR(l.item(), 1.5, 1e-12);
  EXPECT_EQ(l.count, 2);
  EXPECT_NEAR(MaskedMae(Tensor<D>(pred), pred, {true, true}).item(), 0.0, 1e-12);
  EXPECT_NEAR(MaeValue(pred, target, {true, false}), 1.0, 1e-12);
}

TEST(Losses, CrossEntropyOneHotIsZero) {
  Matrix<D> probs = Matrix<D>::Zero(3, 4);
  probs(0, 1) = probs(1, 3) = probs(2, 0) = 1.0;
  EXPECT_NEAR(CrossEntropyValue(probs, {1, 3, 0}, {true, true, true}), 0.0, 1e-12);
}

TEST(Losses, EmptyMaskIsZeroAndFlagged) {
  Tensor<D> x(Matrix<D>::Ones(3, 2), true);
  auto mae = MaskedMae(x, Matrix<D>(Matrix<D>::Zero(3, 2)), {false, false, false});
  EXPECT_TRUE(mae.empty());
  EXPECT_EQ(mae.item(), 0.0);
  auto ce = SoftmaxCrossEntropy(x, {0, 1, 0}, {false, false, false});
  EXPECT_TRUE(ce.empty());
  EXPECT_EQ(ce.item(), 0.0);
  ce.value.Backward();
  EXPECT_EQ(x.grad().size(), 0);
}

TEST(Adam, DeterministicTrajectory) {
  auto run = [] {
    Rng rng(5);
    Linear<float> lin(8, 4, true, rng);
    ParamList<float> params;
    lin.Collect("lin", params);
    OptimizerConfig cfg;
    cfg.warmup_steps = 10;
    cfg.model_width = 8;
    Adam<float> opt(params, cfg);
    Rng data(6);
    for (int step = 0; step < 50; ++step) {
      Tensor<float> x(NormalInit<float>(3, 8, 1.0, data));
      Matrix<float> y = NormalInit<float>(3, 4, 1.0, data);
      MaskedMae(lin.Forward(x), y, {true, true, true}).value.Backward();
      opt.Step();
    }
    return lin.weight.value();
  };
  Matrix<float> a = run();
  Matrix<float> b = run();
  EXPECT_EQ(a, b);
}

TEST(Adam, ConvexQuadraticDecreasesAfterWarmup) {
  Tensor<double> x(Matrix<D>::Constant(1, 4, 3.0), true);
  ParamList<double> params;
  params.Add("x", x);
  OptimizerConfig cfg;
  cfg.warmup_steps = 20;
  cfg.model_width = 1;
  cfg.lr_scale = 0.2;
  cfg.clip_norm = 0;
  Adam<double> opt(params, cfg);
  const Matrix<D> scale = (Matrix<D>(1, 4) << 1.0, 2.0, 0.5, 3.0).finished();
  auto loss = [&] {
    Matrix<D> sq = x.value().array().square() * scale.array();
    return sq.sum();
  };
  std::vector<double> history;
  for (int step = 0; step < 200; ++step) {
    // d/dx sum(scale * x^2) = 2 * scale * x
    x.mutable_grad() = 2.0 * x.value().cwiseProduct(scale);
    opt.Step();
    history.push_back(loss());
  }
  for (size_t i = cfg.warmup_steps; i + 1 < history.size(); ++i) {
    EXPECT_LE(history[i + 1], history[i]) << "step " << i;
  }
  EXPECT_LT(history.back(), 0.01 * 3.0 * 3.0 * 6.5);
}

TEST(Checkpoint, RoundTripAndExactMatch) {
  Rng rng(8);
  Linear<float> a(5, 3, true, rng);
  ParamList<float> pa;
  a.Collect("lin", pa);
  const auto dir = std::filesystem::temp_directory_path() / "prosody_ckpt_test";
  std::filesystem::remove_all(dir);
  ToCheckpoint(pa, {{"heads", "polyphone"}}).Save(dir);

  Linear<float> b(5, 3, true, rng);
  ParamList<float> pb;
  b.Collect("lin", pb);
  auto ckpt = Checkpoint::Load(dir);
  EXPECT_EQ(ckpt.tags.at("heads"), "polyphone");
  LoadParams(ckpt, pb);
  EXPECT_EQ(a.weight.value(), b.weight.value());
  EXPECT_EQ(a.bias.value(), b.bias.value());

  Linear<float> wrong(5, 4, true, rng);
  ParamList<float> pw;
  wrong.Collect("lin", pw);
  EXPECT_THROW(LoadParams(ckpt, pw), Error);

  Linear<float> renamed(5, 3, true, rng);
  ParamList<float> pr;
  renamed.Collect("other", pr);
  EXPECT_THROW(LoadParams(ckpt, pr), Error);
  EXPECT_EQ(LoadParams(ckpt, pr, TransferMap{{{"lin.", "other."}}}), 2u);
  EXPECT_EQ(a.weight.value(), renamed.weight.value());
  std::filesystem::remove_all(dir);
}

TEST(Checkpoint, MissingDirectoryIsMissingArtifact) {
  try {
    Checkpoint::Load("/nonexistent/prosody/ckpt");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.category(), ErrorCategory::kMissingArtifact);
  }
}

}  // namespace
}  // namespace prosody::nn

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

#include "prosody/durpretrain/pretrain.h"

#include <cmath>

#include "prosody/common/batching.h"
#include "prosody/common/error.h"
#include "prosody/lingdata/inventory.h"
#include "prosody/nn/loss.h"

namespace prosody::durpretrain {

namespace {

using lingdata::PhonemeInventory;

constexpr char kModelTag[] = "duration_pretrain";

}  // namespace

int MaskPlan::count() const {
  int n = 0;
  for (bool f : flags) n += f ? 1 : 0;
  return n;
}

MaskPlan MaskPhonemes(const std::vector<int>& ids, double rate, uint64_t seed) {
  if (!(rate >= 0 && rate < 1)) {
    Fail(ErrorCategory::kInvalidArgument, "mask rate must lie in [0, 1)");
  }
  MaskPlan plan{ids, std::vector<bool>(ids.size(), false)};
  if (rate == 0) return plan;
  Rng rng(seed);
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < PhonemeInventory::kNumSpecial) continue;
    if (Bernoulli(rng, rate)) {
      plan.flags[i] = true;
      plan.masked_ids[i] = PhonemeInventory::kMask;
    }
  }
  return plan;
}

template <typename S>
PretrainModel<S>::PretrainModel(const acoustic::AcousticConfig& cfg, Rng& rng) : cfg_(cfg) {
  cfg_.Validate();
  embedding_ = nn::Embedding<S>(cfg.phoneme_vocab, cfg.hidden, rng);
  encoder_ = nn::FFTStack<S>(cfg.encoder_blocks, cfg.BlockConfig(), rng);
  duration_ = acoustic::DurationPredictor<S>(cfg.hidden, cfg.duration_filter,
                                             cfg.duration_kernel, cfg.dropout, rng);
  mlm_ = nn::Linear<S>(cfg.hidden, cfg.phoneme_vocab, true, rng);
}

template <typename S>
nn::Tensor<S> PretrainModel<S>::Encode(const std::vector<int>& ids, const nn::SeqLayout& layout,
                                       const nn::ForwardContext& ctx) const {
  if (static_cast<Index>(ids.size()) != layout.total()) {
    Fail(ErrorCategory::kShape, "phoneme ids do not match the batch layout");
  }
  for (int id : ids) {
    if (id < 0 || id >= cfg_.phoneme_vocab) {
      Fail(ErrorCategory::kData, "phoneme id " + std::to_string(id) + " outside the table");
    }
  }
  return encoder_.Forward(embedding_.Forward(ids), layout, ctx);
}

template <typename S>
nn::Tensor<S> PretrainModel<S>::PredictDurations(const nn::Tensor<S>& hidden,
                                                 const nn::SeqLayout& layout,
                                                 const nn::ForwardContext& ctx) const {
  return duration_.Forward(hidden, layout, ctx);
}

template <typename S>
nn::ParamList<S> PretrainModel<S>::Params() const {
  nn::ParamList<S> out;
  embedding_.Collect("embedding", out);
  encoder_.Collect("encoder", out);
  duration_.Collect("duration", out);
  mlm_.Collect("mlm", out);
  return out;
}

template class PretrainModel<float>;
template class PretrainModel<double>;

PretrainBatch MakePretrainBatch(const std::vector<const lingdata::DurationSample*>& items,
                                double rate, uint64_t mask_seed) {
  PretrainBatch batch;
  std::vector<Index> lengths;
  for (size_t k = 0; k < items.size(); ++k) {
    const auto& s = *items[k];
    if (!s.has_durations()) Fail(ErrorCategory::kData, "pretraining needs durations");
    const MaskPlan plan = MaskPhonemes(s.phoneme_ids, rate, DeriveSeed(mask_seed, k));
    batch.masked_ids.insert(batch.masked_ids.end(), plan.masked_ids.begin(),
                            plan.masked_ids.end());
    batch.targets.insert(batch.targets.end(), s.phoneme_ids.begin(), s.phoneme_ids.end());
    batch.flags.insert(batch.flags.end(), plan.flags.begin(), plan.flags.end());
    batch.durations.insert(batch.durations.end(), s.durations.begin(), s.durations.end());
    lengths.push_back(static_cast<Index>(s.size()));
  }
  batch.layout = nn::SeqLayout(lengths);
  return batch;
}

template <typename S>
PretrainLossTensors<S> PretrainLosses(const PretrainModel<S>& model, const PretrainBatch& batch,
                                      const nn::ForwardContext& ctx) {
  const nn::Tensor<S> hidden = model.Encode(batch.masked_ids, batch.layout, ctx);
  nn::Matrix<S> log_target(batch.layout.total(), 1);
  for (Index i = 0; i < log_target.rows(); ++i) {
    if (batch.durations[i] < 1) Fail(ErrorCategory::kData, "durations must be >= 1");
    log_target(i, 0) = static_cast<S>(std::log(static_cast<double>(batch.durations[i])));
  }
  const std::vector<bool> all(log_target.rows(), true);
  auto dur = nn::MaskedMae(model.PredictDurations(hidden, batch.layout, ctx), log_target, all);
  const nn::Tensor<S> logits = model.MlmLogits(hidden);
  auto mlm = nn::SoftmaxCrossEntropy(logits, batch.targets, batch.flags);
  nn::Tensor<S> total = nn::WeightedSum<S>({dur.value, mlm.value}, {S(1), S(1)});
  return {dur, mlm, total, logits};
}

template PretrainLossTensors<float> PretrainLosses(const PretrainModel<float>&,
                                                   const PretrainBatch&,
                                                   const nn::ForwardContext&);
template PretrainLossTensors<double> PretrainLosses(const PretrainModel<double>&,
                                                    const PretrainBatch&,
                                                    const nn::ForwardContext&);

PretrainStepLosses PretrainStep(const PretrainModel<float>& model, const PretrainBatch& batch,
                                nn::Adam<float>& opt, Rng& dropout_rng) {
  const nn::ForwardContext ctx{true, &dropout_rng};
  auto losses = PretrainLosses(model, batch, ctx);
  PretrainStepLosses out{losses.dur.item(), losses.mlm.item(), losses.total.item()};
  if (!std::isfinite(out.total)) {
    Fail(ErrorCategory::kNumeric, "pretraining loss is not finite at step " +
                                      std::to_string(opt.step() + 1) + " (duration " +
                                      std::to_string(out.dur_mae) + ", mlm " +
                                      std::to_string(out.mlm_ce) + ")");
  }
  losses.total.Backward();
  opt.Step();
  return out;
}

PretrainEval EvaluatePretrain(const PretrainModel<float>& model,
                              const std::vector<lingdata::DurationSample>& data, double rate,
                              uint64_t seed) {
  nn::NoGradGuard no_grad;
  const nn::ForwardContext ctx;
  PretrainEval out;
  double dur_sum = 0, ce_sum = 0;
  long positions = 0, correct = 0;
  constexpr size_t kChunk = 32;
  for (size_t begin = 0; begin < data.size(); begin += kChunk) {
    std::vector<const lingdata::DurationSample*> items;
    for (size_t i = begin; i < std::min(data.size(), begin + kChunk); ++i) {
      items.push_back(&data[i]);
    }
    const PretrainBatch batch = MakePretrainBatch(items, rate, DeriveSeed(seed, begin));
    const auto losses = PretrainLosses(model, batch, ctx);
    dur_sum += losses.dur.item() * losses.dur.count;
    positions += losses.dur.count;
    if (losses.mlm.empty()) continue;
    ce_sum += losses.mlm.item() * losses.mlm.count;
    out.masked += losses.mlm.count;
    const auto& logits = losses.mlm_logits;
    for (Index r = 0; r < logits.rows(); ++r) {
      if (!batch.flags[r]) continue;
      Index best = 0;
      logits.value().row(r).maxCoeff(&best);
      correct += best == batch.targets[r] ? 1 : 0;
    }
  }
  if (positions) out.dur_mae = dur_sum / positions;
  if (out.masked) {
    out.mlm_ce = ce_sum / out.masked;
    out.accuracy = static_cast<double>(correct) / out.masked;
  }
  return out;
}

PretrainReport Pretrain(PretrainModel<float>& model,
                        const std::vector<lingdata::DurationSample>& train,
                        const std::vector<lingdata::DurationSample>& heldout,
                        const PretrainConfig& cfg, uint64_t seed) {
  if (train.empty()) Fail(ErrorCategory::kData, "duration pretraining set is empty");
  PretrainReport report;
  report.chance_accuracy =
      1.0 / (model.config().phoneme_vocab - PhonemeInventory::kNumSpecial);
  const uint64_t eval_seed = DeriveSeed(seed, 1);
  if (!heldout.empty()) report.initial = EvaluatePretrain(model, heldout, cfg.mask_rate, eval_seed);
  nn::Adam<float> opt(model.Params(), cfg.optimizer);
  BatchSampler sampler(train.size(), cfg.batch_size, DeriveSeed(seed, 2));
  Rng dropout_rng(DeriveSeed(seed, 4));
  const uint64_t mask_seed = DeriveSeed(seed, 3);
  nn::LossWindow total_w(cfg.log_every), dur_w(cfg.log_every), mlm_w(cfg.log_every);
  for (int step = 1; step <= cfg.steps; ++step) {
    std::vector<const lingdata::DurationSample*> items;
    for (size_t i : sampler.Next()) items.push_back(&train[i]);
    const PretrainBatch batch =
        MakePretrainBatch(items, cfg.mask_rate, DeriveSeed(mask_seed, step));
    const PretrainStepLosses l = PretrainStep(model, batch, opt, dropout_rng);
    if (step == 1) report.first_step_total = l.total;
    total_w.Add(l.total, report.total);
    dur_w.Add(l.dur_mae, report.dur);
    mlm_w.Add(l.mlm_ce, report.mlm);
  }
  total_w.Flush(report.total);
  dur_w.Flush(report.dur);
  mlm_w.Flush(report.mlm);
  if (!heldout.empty()) report.final = EvaluatePretrain(model, heldout, cfg.mask_rate, eval_seed);
  return report;
}

nn::TransferMap DurationTransferMap() {
  return {{{"embedding.", "embedding."}, {"encoder.", "encoder."}, {"duration.", "duration."}}};
}

template <typename S>
size_t TransferWeights(const PretrainModel<S>& pretrained, acoustic::AcousticModel<S>& target) {
  nn::ParamList<S> dst = target.Params();
  return nn::TransferParams(pretrained.Params(), dst, DurationTransferMap());
}

template size_t TransferWeights(const PretrainModel<float>&, acoustic::AcousticModel<float>&);
template size_t TransferWeights(const PretrainModel<double>&, acoustic::AcousticModel<double>&);

void SavePretrain(const std::filesystem::path& dir, const PretrainModel<float>& model,
                  const std::string& provenance) {
  auto tags = model.config().ToTags();
  tags["model"] = kModelTag;
  tags["provenance"] = provenance;
  nn::ToCheckpoint(model.Params(), tags).Save(dir);
}

LoadedPretrain LoadPretrain(const std::filesystem::path& dir) {
  const nn::Checkpoint ckpt = nn::Checkpoint::Load(dir);
  auto it = ckpt.tags.find("model");
  if (it == ckpt.tags.end() || it->second != kModelTag) {
    Fail(ErrorCategory::kData, dir.string() + " is not a duration pretraining checkpoint");
  }
  Rng rng(0);
  LoadedPretrain out{PretrainModel<float>(acoustic::AcousticConfig::FromTags(ckpt.tags), rng),
                     ckpt.tags.count("provenance") ? ckpt.tags.at("provenance") : ""};
  auto params = out.model.Params();
  nn::LoadParams(ckpt, params);
  return out;
}

size_t TransferFromCheckpoint(const std::filesystem::path& dir,
                              acoustic::AcousticModel<float>& target) {
  const nn::Checkpoint ckpt = nn::Checkpoint::Load(dir);
  auto it = ckpt.tags.find("model");
  if (it == ckpt.tags.end() || it->second != kModelTag) {
    Fail(ErrorCategory::kData, dir.string() + " is not a duration pretraining checkpoint");
  }
  auto params = target.Params();
  return nn::LoadParams(ckpt, params, DurationTransferMap());
}

}  // namespace prosody::durpretrain

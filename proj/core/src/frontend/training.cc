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

#include "prosody/frontend/training.h"

#include <cmath>

#include "prosody/common/batching.h"
#include "prosody/common/error.h"
#include "prosody/nn/loss.h"

namespace prosody::frontend {

namespace {

using nn::Index;

struct PackedBatch {
  std::vector<int> ids;
  nn::SeqLayout layout;
};

PackedBatch PackIds(const std::vector<const std::vector<int>*>& seqs) {
  PackedBatch out;
  std::vector<Index> lengths;
  for (const auto* s : seqs) {
    out.ids.insert(out.ids.end(), s->begin(), s->end());
    lengths.push_back(static_cast<Index>(s->size()));
  }
  out.layout = nn::SeqLayout(lengths);
  return out;
}

const std::vector<int>& Labels(const FrontendExample& ex, Task t) {
  switch (t) {
    case Task::kPolyphone:
      return ex.polyphone;
    case Task::kSegPos:
      return ex.seg_pos;
    case Task::kProsody:
      return ex.prosody;
  }
  return ex.prosody;
}

void CheckFinite(double v, long step, const char* what) {
  if (!std::isfinite(v)) {
    Fail(ErrorCategory::kNumeric, std::string(what) + " is not finite at step " +
                                      std::to_string(step));
  }
}

}  // namespace

FrontendExample MakeExample(const lingdata::AnnotatedSentence& s, const CharVocab& vocab,
                            const lingdata::Lexicon& lex, const std::set<Task>& tasks) {
  FrontendExample ex;
  ex.char_ids = vocab.Encode(s.chars);
  const size_t n = s.size();
  auto require = [&](bool ok, Task t) {
    if (!ok) {
      Fail(ErrorCategory::kData, "task " + std::string(TaskName(t)) +
                                     " requested but sentence '" + s.Text() +
                                     "' has no labels for it");
    }
  };
  if (tasks.count(Task::kPolyphone)) {
    require(s.pinyin.size() == n, Task::kPolyphone);
    ex.polyphone.assign(n, -1);
    for (size_t i = 0; i < n; ++i) {
      const auto& cands = lex.Candidates(s.chars[i]);
      if (cands.size() < 2) continue;
      if (s.pinyin[i] < 0 || s.pinyin[i] >= static_cast<int>(cands.size())) {
        Fail(ErrorCategory::kData, "pinyin index out of range in '" + s.Text() + "'");
      }
      ex.polyphone[i] = lex.PolyphoneLabel(cands[s.pinyin[i]]);
    }
  }
  if (tasks.count(Task::kSegPos)) {
    require(s.seg_pos.size() == n, Task::kSegPos);
    for (const auto& t : s.seg_pos) ex.seg_pos.push_back(t.Id());
  }
  if (tasks.count(Task::kProsody)) {
    require(s.prosody.size() == n, Task::kProsody);
    for (auto b : s.prosody) ex.prosody.push_back(static_cast<int>(b));
  }
  return ex;
}

std::vector<FrontendExample> MakeExamples(const std::vector<lingdata::AnnotatedSentence>& corpus,
                                          const CharVocab& vocab, const lingdata::Lexicon& lex,
                                          const std::set<Task>& tasks) {
  std::vector<FrontendExample> out;
  out.reserve(corpus.size());
  for (const auto& s : corpus) out.push_back(MakeExample(s, vocab, lex, tasks));
  return out;
}

MaskedIds MaskCharacters(const std::vector<int>& ids, double rate, Rng& rng) {
  if (rate < 0 || rate >= 1) Fail(ErrorCategory::kInvalidArgument, "mask rate must lie in [0,1)");
  MaskedIds out{ids, std::vector<bool>(ids.size(), false)};
  for (size_t i = 0; i < ids.size(); ++i) {
    if (ids[i] < CharVocab::kNumSpecial) continue;
    if (Bernoulli(rng, rate)) {
      out.ids[i] = CharVocab::kMask;
      out.flags[i] = true;
    }
  }
  return out;
}

double TaskWeights::Get(Task t) const {
  auto it = weights.find(t);
  return it == weights.end() ? 1.0 : it->second;
}

void TaskWeights::Validate() const {
  for (const auto& [t, w] : weights) {
    if (!(w >= 0)) {
      Fail(ErrorCategory::kConfig, "task weight for " + std::string(TaskName(t)) +
                                       " must be >= 0");
    }
  }
}

MlmEval EvaluateMlm(const CharEncoder<float>& enc, const std::vector<FrontendExample>& data,
                    double mask_rate, uint64_t seed) {
  nn::NoGradGuard no_grad;
  MlmEval out;
  double loss_sum = 0;
  long correct = 0;
  constexpr size_t kChunk = 64;
  for (size_t begin = 0; begin < data.size(); begin += kChunk) {
    std::vector<MaskedIds> masked;
    std::vector<const std::vector<int>*> seqs;
    for (size_t i = begin; i < std::min(data.size(), begin + kChunk); ++i) {
      Rng rng = MakeRng(seed, i);
      masked.push_back(MaskCharacters(data[i].char_ids, mask_rate, rng));
    }
    for (const auto& m : masked) seqs.push_back(&m.ids);
    PackedBatch batch = PackIds(seqs);
    std::vector<int> labels;
    std::vector<bool> mask;
    for (size_t k = 0; k < masked.size(); ++k) {
      const auto& orig = data[begin + k].char_ids;
      labels.insert(labels.end(), orig.begin(), orig.end());
      mask.insert(mask.end(), masked[k].flags.begin(), masked[k].flags.end());
    }
    const nn::Tensor<float> logits = enc.MlmLogits(enc.Encode(batch.ids, batch.layout, {}));
    const auto& v = logits.value();
    for (Index r = 0; r < v.rows(); ++r) {
      if (!mask[r]) continue;
      const float mx = v.row(r).maxCoeff();
      const double lse = mx + std::log((v.row(r).array() - mx).exp().sum());
      loss_sum += lse - v(r, labels[r]);
      Index arg = 0;
      v.row(r).maxCoeff(&arg);
      correct += arg == labels[r];
      ++out.masked;
    }
  }
  if (out.masked > 0) {
    out.loss = loss_sum / out.masked;
    out.accuracy = static_cast<double>(correct) / out.masked;
  }
  return out;
}

MlmReport PretrainCharMlm(CharEncoder<float>& enc, const std::vector<FrontendExample>& train,
                          const std::vector<FrontendExample>& heldout, const TrainConfig& cfg,
                          uint64_t seed) {
  if (train.empty()) Fail(ErrorCategory::kData, "MLM pretraining corpus is empty");
  const uint64_t eval_seed = DeriveSeed(seed, 1);
  MlmReport report;
  report.chance_accuracy = 1.0 / (enc.config().vocab_size - CharVocab::kNumSpecial);
  if (!heldout.empty()) {
    report.initial_heldout_loss = EvaluateMlm(enc, heldout, cfg.mask_rate, eval_seed).loss;
  }
  nn::ParamList<float> params = enc.Params();
  nn::Adam<float> opt(params, cfg.optimizer);
  BatchSampler sampler(train.size(), cfg.batch_size, DeriveSeed(seed, 2));
  Rng mask_rng(DeriveSeed(seed, 3));
  Rng dropout_rng(DeriveSeed(seed, 4));
  const nn::ForwardContext ctx{true, &dropout_rng};
  nn::LossWindow window(cfg.log_every);
  for (int step = 1; step <= cfg.steps; ++step) {
    std::vector<MaskedIds> masked;
    std::vector<int> labels;
    std::vector<bool> mask;
    for (size_t i : sampler.Next()) {
      masked.push_back(MaskCharacters(train[i].char_ids, cfg.mask_rate, mask_rng));
      labels.insert(labels.end(), train[i].char_ids.begin(), train[i].char_ids.end());
      mask.insert(mask.end(), masked.back().flags.begin(), masked.back().flags.end());
    }
    std::vector<const std::vector<int>*> seqs;
    for (const auto& m : masked) seqs.push_back(&m.ids);
    PackedBatch batch = PackIds(seqs);
    auto loss = nn::SoftmaxCrossEntropy(enc.MlmLogits(enc.Encode(batch.ids, batch.layout, ctx)),
                                        labels, mask);
    if (loss.empty()) continue;
    CheckFinite(loss.item(), step, "MLM loss");
    loss.value.Backward();
    opt.Step();
    window.Add(loss.item(), report.train);
  }
  window.Flush(report.train);
  if (!heldout.empty()) {
    const MlmEval eval = EvaluateMlm(enc, heldout, cfg.mask_rate, eval_seed);
    report.final_heldout_loss = eval.loss;
    report.heldout_accuracy = eval.accuracy;
  }
  return report;
}

FinetuneReport Finetune(CharEncoder<float>& enc, const std::vector<FrontendExample>& train,
                        const std::set<Task>& tasks, const TaskWeights& weights,
                        const TrainConfig& cfg, uint64_t seed) {
  FinetuneReport report;
  if (tasks.empty()) return report;
  if (train.empty()) Fail(ErrorCategory::kData, "fine-tuning corpus is empty");
  weights.Validate();
  for (Task t : tasks) {
    if (Labels(train.front(), t).size() != train.front().char_ids.size()) {
      Fail(ErrorCategory::kData, "task " + std::string(TaskName(t)) +
                                     " requested but the corpus carries no labels for it");
    }
  }
  Rng init_rng(DeriveSeed(seed, 0));
  enc.AddHeads(tasks, init_rng);
  nn::ParamList<float> params = enc.Params();
  nn::Adam<float> opt(params, cfg.optimizer);
  BatchSampler sampler(train.size(), cfg.batch_size, DeriveSeed(seed, 2));
  Rng dropout_rng(DeriveSeed(seed, 4));
  const nn::ForwardContext ctx{true, &dropout_rng};
  nn::LossWindow total_window(cfg.log_every);
  std::map<Task, nn::LossWindow> windows;
  for (Task t : tasks) windows.emplace(t, nn::LossWindow(cfg.log_every));
  for (int step = 1; step <= cfg.steps; ++step) {
    const auto idx = sampler.Next();
    std::vector<const std::vector<int>*> seqs;
    for (size_t i : idx) seqs.push_back(&train[i].char_ids);
    PackedBatch batch = PackIds(seqs);
    const nn::Tensor<float> hidden = enc.Encode(batch.ids, batch.layout, ctx);
    std::vector<nn::Tensor<float>> terms;
    std::vector<float> coeffs;
    for (Task t : tasks) {
      std::vector<int> labels;
      std::vector<bool> mask;
      for (size_t i : idx) {
        const auto& l = Labels(train[i], t);
        if (l.size() != train[i].char_ids.size()) {
          Fail(ErrorCategory::kData, "task " + std::string(TaskName(t)) +
                                         " requested but example " + std::to_string(i) +
                                         " has no labels for it");
        }
        for (int y : l) {
          labels.push_back(std::max(y, 0));
          mask.push_back(y >= 0);
        }
      }
      auto loss = nn::SoftmaxCrossEntropy(enc.HeadLogits(hidden, t), labels, mask);
      CheckFinite(loss.item(), step, "fine-tuning loss");
      if (!loss.empty()) windows.at(t).Add(loss.item(), report.task_losses[t]);
      terms.push_back(loss.value);
      coeffs.push_back(static_cast<float>(weights.Get(t)));
    }
    nn::Tensor<float> total = nn::WeightedSum(terms, coeffs);
    total_window.Add(total.item(), report.total);
    total.Backward();
    opt.Step();
    ++report.steps;
  }
  total_window.Flush(report.total);
  for (auto& [t, w] : windows) w.Flush(report.task_losses[t]);
  return report;
}

}  // namespace prosody::frontend

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

#ifndef PROSODY_DURPRETRAIN_PRETRAIN_H_
#define PROSODY_DURPRETRAIN_PRETRAIN_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "prosody/acoustic/model.h"
#include "prosody/lingdata/duration.h"
#include "prosody/nn/layers.h"
#include "prosody/nn/optim.h"

namespace prosody::durpretrain {

using nn::Index;

// Mask flags for one phoneme sequence. Specials (PAD, MASK, SP, SIL) are
// never flagged.
struct MaskPlan {
  std::vector<int> masked_ids;
  std::vector<bool> flags;

  int count() const;
};

// Each non-special position is flagged with probability `rate` and its id
// replaced by MASK. Deterministic in (ids, rate, seed); rate in [0, 1).
MaskPlan MaskPhonemes(const std::vector<int>& ids, double rate, uint64_t seed);

// Embedding + encoder + duration predictor with the acoustic model's shapes
// and names, plus an MLM head over the phoneme inventory.
template <typename S>
class PretrainModel {
 public:
  PretrainModel() = default;
  PretrainModel(const acoustic::AcousticConfig& cfg, Rng& rng);

  nn::Tensor<S> Encode(const std::vector<int>& ids, const nn::SeqLayout& layout,
                       const nn::ForwardContext& ctx) const;
  nn::Tensor<S> PredictDurations(const nn::Tensor<S>& hidden, const nn::SeqLayout& layout,
                                 const nn::ForwardContext& ctx) const;
  nn::Tensor<S> MlmLogits(const nn::Tensor<S>& hidden) const { return mlm_.Forward(hidden); }

  nn::ParamList<S> Params() const;
  const acoustic::AcousticConfig& config() const { return cfg_; }

 private:
  acoustic::AcousticConfig cfg_;
  nn::Embedding<S> embedding_;
  nn::FFTStack<S> encoder_;
  acoustic::DurationPredictor<S> duration_;
  nn::Linear<S> mlm_;
};

extern template class PretrainModel<float>;
extern template class PretrainModel<double>;

// Packed masked batch. `targets` holds the original ids.
struct PretrainBatch {
  std::vector<int> masked_ids;
  std::vector<int> targets;
  std::vector<bool> flags;
  std::vector<int> durations;
  nn::SeqLayout layout;
};

// Sample k of the batch is masked with DeriveSeed(mask_seed, k).
PretrainBatch MakePretrainBatch(const std::vector<const lingdata::DurationSample*>& items,
                                double rate, uint64_t mask_seed);

template <typename S>
struct PretrainLossTensors {
  nn::MaskedLoss<S> dur;
  nn::MaskedLoss<S> mlm;
  nn::Tensor<S> total;
  nn::Tensor<S> mlm_logits;
};

// Log-domain duration MAE over every position, masked or not, plus MLM
// cross-entropy over the flagged positions; total = dur + mlm.
template <typename S>
PretrainLossTensors<S> PretrainLosses(const PretrainModel<S>& model,
                                      const PretrainBatch& batch,
                                      const nn::ForwardContext& ctx);

struct PretrainStepLosses {
  double dur_mae = 0;
  double mlm_ce = 0;
  double total = 0;
};

PretrainStepLosses PretrainStep(const PretrainModel<float>& model, const PretrainBatch& batch,
                                nn::Adam<float>& opt, Rng& dropout_rng);

struct PretrainConfig {
  int steps = 2000;
  int batch_size = 16;
  double mask_rate = 0.15;
  int log_every = 100;
  nn::OptimizerConfig optimizer;
};

struct PretrainEval {
  double dur_mae = 0;
  double mlm_ce = 0;
  double accuracy = 0;  // over masked positions
  long masked = 0;
};

PretrainEval EvaluatePretrain(const PretrainModel<float>& model,
                              const std::vector<lingdata::DurationSample>& data, double rate,
                              uint64_t seed);

struct PretrainReport {
  nn::LossCurve total;
  nn::LossCurve dur;
  nn::LossCurve mlm;
  double first_step_total = 0;
  PretrainEval initial;
  PretrainEval final;
  double chance_accuracy = 0;
};

PretrainReport Pretrain(PretrainModel<float>& model,
                        const std::vector<lingdata::DurationSample>& train,
                        const std::vector<lingdata::DurationSample>& heldout,
                        const PretrainConfig& cfg, uint64_t seed);

// embedding.*, encoder.*, duration.* copied one to one.
nn::TransferMap DurationTransferMap();

// Copies embedding, encoder and duration predictor into `target`; decoder,
// mel projection and any combine layer are untouched, the MLM head is
// dropped. Returns the number of tensors copied.
template <typename S>
size_t TransferWeights(const PretrainModel<S>& pretrained, acoustic::AcousticModel<S>& target);

// Checkpoint tagged with the data provenance ("clean" or "noisy").
void SavePretrain(const std::filesystem::path& dir, const PretrainModel<float>& model,
                  const std::string& provenance);
struct LoadedPretrain {
  PretrainModel<float> model;
  std::string provenance;
};
LoadedPretrain LoadPretrain(const std::filesystem::path& dir);

// Loads the transferable groups of a saved pretrain checkpoint into `target`.
size_t TransferFromCheckpoint(const std::filesystem::path& dir,
                              acoustic::AcousticModel<float>& target);

}  // namespace prosody::durpretrain

#endif  // PROSODY_DURPRETRAIN_PRETRAIN_H_

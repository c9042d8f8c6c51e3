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

#ifndef PROSODY_ACOUSTIC_MODEL_H_
#define PROSODY_ACOUSTIC_MODEL_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "prosody/frontend/features.h"
#include "prosody/lingdata/duration.h"
#include "prosody/nn/layers.h"
#include "prosody/nn/loss.h"
#include "prosody/nn/optim.h"

namespace prosody::acoustic {

using nn::Index;

struct AcousticConfig {
  int phoneme_vocab = 0;
  int hidden = 256;
  int encoder_blocks = 4;
  int decoder_blocks = 4;
  int heads = 2;
  int conv_filter = 1024;
  int conv_kernel = 9;
  double dropout = 0.1;
  int duration_filter = 256;
  int duration_kernel = 3;
  int mel_dims = 80;
  // Front-end features: char embeddings of width char_hidden are combined
  // with phoneme embeddings before the encoder.
  bool use_frontend = false;
  int char_hidden = 128;
  int combine_kernel = 3;

  nn::FFTBlockConfig BlockConfig() const;
  void Validate() const;
  std::map<std::string, std::string> ToTags() const;
  static AcousticConfig FromTags(const std::map<std::string, std::string>& tags);
};

// 2 x (conv + ReLU + layer norm + dropout) + linear -> one log-frame value
// per position.
template <typename S>
class DurationPredictor {
 public:
  DurationPredictor() = default;
  DurationPredictor(Index in, Index filter, int kernel, double dropout, Rng& rng);

  nn::Tensor<S> Forward(const nn::Tensor<S>& x, const nn::SeqLayout& layout,
                        const nn::ForwardContext& ctx) const;
  void Collect(const std::string& prefix, nn::ParamList<S>& out) const;

 private:
  double dropout_ = 0.1;
  nn::Conv1dLayer<S> conv1_;
  nn::LayerNormLayer<S> norm1_;
  nn::Conv1dLayer<S> conv2_;
  nn::LayerNormLayer<S> norm2_;
  nn::Linear<S> proj_;
};

// Packed TTS batch. Rows of phoneme-level tensors follow phone_layout,
// frame-level ones frame_layout.
template <typename S>
struct AcousticBatch {
  std::vector<int> phoneme_ids;
  nn::SeqLayout phone_layout;
  std::vector<int> durations;
  nn::Matrix<S> mel;  // (frames, mel_dims); empty at inference
  nn::SeqLayout frame_layout;
  nn::Matrix<S> char_embeddings;  // packed chars; empty without front-end
  std::vector<Index> char_index;  // packed char row per phoneme
};

struct TtsExample {
  lingdata::DurationSample sample;
  nn::Matrix<float> mel;
  nn::Matrix<float> char_embeddings;  // empty without front-end
};

// Expands phoneme positions by integer durations. Returns the source row of
// every output frame; frame_layout receives per-item frame counts.
std::vector<Index> LengthRegulateIndex(const std::vector<int>& durations,
                                       const nn::SeqLayout& phone_layout,
                                       nn::SeqLayout* frame_layout);

template <typename S>
nn::Tensor<S> LengthRegulate(const nn::Tensor<S>& hidden, const std::vector<int>& durations,
                             const nn::SeqLayout& phone_layout, nn::SeqLayout* frame_layout) {
  return nn::GatherRows(hidden, LengthRegulateIndex(durations, phone_layout, frame_layout));
}

// clamp(round(exp(x)), min 1)
std::vector<int> DecodeDurations(const nn::Matrix<float>& log_durations);

template <typename S>
AcousticBatch<S> MakeBatch(const std::vector<const TtsExample*>& items, bool use_frontend);

struct StepLosses {
  double mel_mae = 0;
  double dur_mae = 0;
  double total = 0;
};

template <typename S>
struct LossTensors {
  nn::MaskedLoss<S> mel;
  nn::MaskedLoss<S> dur;
  nn::Tensor<S> total;
};

template <typename S>
class AcousticModel {
 public:
  AcousticModel() = default;
  AcousticModel(const AcousticConfig& cfg, Rng& rng);

  // Phoneme ids (and char embeddings when configured) -> (T, hidden).
  nn::Tensor<S> Encode(const AcousticBatch<S>& batch, const nn::ForwardContext& ctx) const;
  // Encoder states -> (T, 1) log-domain frame counts.
  nn::Tensor<S> PredictDurations(const nn::Tensor<S>& hidden, const nn::SeqLayout& layout,
                                 const nn::ForwardContext& ctx) const;
  // Frame-level states -> (F, mel_dims).
  nn::Tensor<S> Decode(const nn::Tensor<S>& frames, const nn::SeqLayout& frame_layout,
                       const nn::ForwardContext& ctx) const;

  // Teacher-forced losses: frame MAE of the mel, log-domain duration MAE.
  LossTensors<S> Losses(const AcousticBatch<S>& batch, const nn::ForwardContext& ctx) const;

  nn::ParamList<S> Params() const;
  const AcousticConfig& config() const { return cfg_; }
  nn::Linear<S>& mel_linear() { return mel_; }

 private:
  AcousticConfig cfg_;
  nn::Embedding<S> embedding_;
  frontend::CombineLayer<S> combine_;
  nn::FFTStack<S> encoder_;
  DurationPredictor<S> duration_;
  nn::FFTStack<S> decoder_;
  nn::Linear<S> mel_;
};

extern template class DurationPredictor<float>;
extern template class DurationPredictor<double>;
extern template class AcousticModel<float>;
extern template class AcousticModel<double>;

// One optimizer step on the batch. Throws kNumeric with the step number when
// the loss is not finite.
StepLosses TrainStep(const AcousticModel<float>& model, const AcousticBatch<float>& batch,
                     nn::Adam<float>& opt, Rng& dropout_rng);

struct Synthesis {
  nn::Matrix<float> mel;
  std::vector<int> durations;
};

// encode -> durations -> decode rule -> length regulate -> decode.
Synthesis Synthesize(const AcousticModel<float>& model, const TtsExample& input);

// Mean |predicted frames - gold frames| over all phonemes, inference mode.
double DurationMaeFrames(const AcousticModel<float>& model,
                         const std::vector<TtsExample>& data);

void SaveAcoustic(const std::filesystem::path& dir, const AcousticModel<float>& model,
                  std::map<std::string, std::string> extra_tags = {});
AcousticModel<float> LoadAcoustic(const std::filesystem::path& dir);

}  // namespace prosody::acoustic

#endif  // PROSODY_ACOUSTIC_MODEL_H_

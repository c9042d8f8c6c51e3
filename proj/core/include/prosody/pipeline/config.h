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

#ifndef PROSODY_PIPELINE_CONFIG_H_
#define PROSODY_PIPELINE_CONFIG_H_

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "prosody/acoustic/model.h"
#include "prosody/frontend/char_encoder.h"
#include "prosody/frontend/training.h"
#include "prosody/lingdata/corpus.h"
#include "prosody/nn/optim.h"

namespace prosody::pipeline {

struct DataSection {
  int frontend_train = 4000;
  int frontend_test = 400;
  int tts_train = 200;
  int tts_test = 100;
  int pretrain_train = 2800;
  int pretrain_heldout = 200;
};

struct EncoderSection {
  int hidden = 128;
  int blocks = 4;
  int heads = 2;
  int conv_filter = 512;
  int conv_kernel = 1;
  double dropout = 0.1;
  int mlm_steps = 2000;
  int finetune_steps = 3000;
  int batch_size = 32;
  double mask_rate = 0.15;
  int warmup_steps = 300;
  double lr_scale = 0.1;
};

struct AcousticSection {
  int hidden = 256;
  int encoder_blocks = 4;
  int decoder_blocks = 4;
  int heads = 2;
  int conv_filter = 1024;
  int conv_kernel = 3;
  int duration_filter = 256;
  int duration_kernel = 3;
  int mel_dims = 80;
  double dropout = 0.1;
};

struct PretrainSection {
  int steps = 1000;
  int batch_size = 16;
  double mask_rate = 0.15;
  lingdata::NoiseParams noise = lingdata::NoiseParams::Noisy();
};

struct TrainingSection {
  int steps = 2000;
  int batch_size = 16;
  int warmup_steps = 200;
  double lr_scale = 0.1;
  int log_every = 100;
  int eval_every = 50;
};

// Every knob of a run. Seeds of all stages derive from `seed`.
struct RunConfig {
  std::string profile = "desk";
  uint64_t seed = 1;
  DataSection data;
  EncoderSection encoder;
  AcousticSection acoustic;
  PretrainSection pretraining;
  TrainingSection training;

  // Throws kConfig naming the first invalid field.
  void Validate() const;

  // Named profiles: "paper" (full-size values, for reference), "desk"
  // (default) and "ci" (narrow acoustic model, shortest budgets that still
  // train).
  static RunConfig Profile(const std::string& name);
  static std::vector<std::string> ProfileNames();

  frontend::CharEncoderConfig EncoderConfig(int vocab_size, int polyphone_labels,
                                            int seg_pos_labels,
                                            const std::set<frontend::Task>& tasks) const;
  frontend::TrainConfig MlmTrainConfig() const;
  frontend::TrainConfig FinetuneTrainConfig() const;
  acoustic::AcousticConfig AcousticModelConfig(int phoneme_vocab, bool use_frontend) const;
  nn::OptimizerConfig AcousticOptimizer() const;
};

}  // namespace prosody::pipeline

#endif  // PROSODY_PIPELINE_CONFIG_H_

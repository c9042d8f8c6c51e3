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

#include "prosody/pipeline/config.h"

#include "prosody/common/error.h"

namespace prosody::pipeline {

namespace {

void Require(bool ok, const std::string& field, const std::string& rule) {
  if (!ok) Fail(ErrorCategory::kConfig, field + ": " + rule);
}

void Positive(int v, const std::string& field) { Require(v > 0, field, "must be > 0"); }

void Probability(double v, const std::string& field, bool allow_one) {
  Require(v >= 0 && (allow_one ? v <= 1 : v < 1), field,
          allow_one ? "must be in [0, 1]" : "must be in [0, 1)");
}

}  // namespace

void RunConfig::Validate() const {
  Positive(data.frontend_train, "data.frontend_train");
  Positive(data.frontend_test, "data.frontend_test");
  Positive(data.tts_train, "data.tts_train");
  Positive(data.tts_test, "data.tts_test");
  Positive(data.pretrain_train, "data.pretrain_train");
  Positive(data.pretrain_heldout, "data.pretrain_heldout");

  Positive(encoder.hidden, "encoder.hidden");
  Positive(encoder.blocks, "encoder.blocks");
  Positive(encoder.heads, "encoder.heads");
  Require(encoder.hidden % encoder.heads == 0, "encoder.heads", "must divide encoder.hidden");
  Positive(encoder.conv_filter, "encoder.conv_filter");
  Require(encoder.conv_kernel > 0 && encoder.conv_kernel % 2 == 1, "encoder.conv_kernel",
          "must be odd and > 0");
  Probability(encoder.dropout, "encoder.dropout", false);
  Require(encoder.mlm_steps >= 0, "encoder.mlm_steps", "must be >= 0");
  Require(encoder.finetune_steps >= 0, "encoder.finetune_steps", "must be >= 0");
  Positive(encoder.batch_size, "encoder.batch_size");
  Probability(encoder.mask_rate, "encoder.mask_rate", false);
  Positive(encoder.warmup_steps, "encoder.warmup_steps");
  Require(encoder.lr_scale > 0, "encoder.lr_scale", "must be > 0");

  Positive(acoustic.hidden, "acoustic.hidden");
  Positive(acoustic.encoder_blocks, "acoustic.encoder_blocks");
  Positive(acoustic.decoder_blocks, "acoustic.decoder_blocks");
  Positive(acoustic.heads, "acoustic.heads");
  Require(acoustic.hidden % acoustic.heads == 0, "acoustic.heads", "must divide acoustic.hidden");
  Positive(acoustic.conv_filter, "acoustic.conv_filter");
  Require(acoustic.conv_kernel > 0 && acoustic.conv_kernel % 2 == 1, "acoustic.conv_kernel",
          "must be odd and > 0");
  Positive(acoustic.duration_filter, "acoustic.duration_filter");
  Require(acoustic.duration_kernel > 0 && acoustic.duration_kernel % 2 == 1,
          "acoustic.duration_kernel", "must be odd and > 0");
  Positive(acoustic.mel_dims, "acoustic.mel_dims");
  Probability(acoustic.dropout, "acoustic.dropout", false);

  Require(pretraining.steps >= 0, "pretraining.steps", "must be >= 0");
  Positive(pretraining.batch_size, "pretraining.batch_size");
  Probability(pretraining.mask_rate, "pretraining.mask_rate", false);
  Require(pretraining.noise.dur_sigma >= 0, "pretraining.noise.dur_sigma", "must be >= 0");
  Probability(pretraining.noise.sub_prob, "pretraining.noise.sub_prob", true);
  Probability(pretraining.noise.sp_drop_prob, "pretraining.noise.sp_drop_prob", true);

  Require(training.steps >= 0, "training.steps", "must be >= 0");
  Positive(training.batch_size, "training.batch_size");
  Positive(training.warmup_steps, "training.warmup_steps");
  Require(training.lr_scale > 0, "training.lr_scale", "must be > 0");
  Positive(training.log_every, "training.log_every");
  Require(training.eval_every >= 0, "training.eval_every", "must be >= 0");
}

std::vector<std::string> RunConfig::ProfileNames() { return {"paper", "desk", "ci"}; }

RunConfig RunConfig::Profile(const std::string& name) {
  RunConfig c;
  c.profile = name;
  if (name == "desk") return c;
  if (name == "ci") {
    c.acoustic.hidden = 32;
    c.acoustic.conv_filter = 128;
    c.acoustic.duration_filter = 32;
    c.training.steps = 1000;
    return c;
  }
  if (name == "paper") {
    c.data.frontend_train = 20000;
    c.data.tts_train = 2000;
    c.encoder.hidden = 768;
    c.encoder.blocks = 12;
    c.encoder.heads = 12;
    c.encoder.conv_filter = 3072;
    c.encoder.mlm_steps = 20000;
    c.encoder.finetune_steps = 20000;
    c.encoder.warmup_steps = 4000;
    c.encoder.lr_scale = 1.0;
    c.acoustic.conv_kernel = 9;
    c.pretraining.steps = 20000;
    c.pretraining.batch_size = 48;
    c.training.steps = 20000;
    c.training.batch_size = 48;
    c.training.warmup_steps = 4000;
    c.training.lr_scale = 1.0;
    c.training.eval_every = 1000;
    return c;
  }
  Fail(ErrorCategory::kConfig, "profile: unknown name '" + name + "' (paper, desk, ci)");
}

frontend::CharEncoderConfig RunConfig::EncoderConfig(int vocab_size, int polyphone_labels,
                                                     int seg_pos_labels,
                                                     const std::set<frontend::Task>& tasks) const {
  frontend::CharEncoderConfig c;
  c.vocab_size = vocab_size;
  c.hidden = encoder.hidden;
  c.blocks = encoder.blocks;
  c.heads = encoder.heads;
  c.conv_filter = encoder.conv_filter;
  c.conv_kernel = encoder.conv_kernel;
  c.dropout = encoder.dropout;
  c.polyphone_labels = polyphone_labels;
  c.seg_pos_labels = seg_pos_labels;
  c.tasks = tasks;
  return c;
}

frontend::TrainConfig RunConfig::MlmTrainConfig() const {
  frontend::TrainConfig t;
  t.steps = encoder.mlm_steps;
  t.batch_size = encoder.batch_size;
  t.mask_rate = encoder.mask_rate;
  t.log_every = training.log_every;
  t.optimizer.warmup_steps = encoder.warmup_steps;
  t.optimizer.model_width = encoder.hidden;
  t.optimizer.lr_scale = encoder.lr_scale;
  return t;
}

frontend::TrainConfig RunConfig::FinetuneTrainConfig() const {
  frontend::TrainConfig t = MlmTrainConfig();
  t.steps = encoder.finetune_steps;
  return t;
}

acoustic::AcousticConfig RunConfig::AcousticModelConfig(int phoneme_vocab,
                                                        bool use_frontend) const {
  acoustic::AcousticConfig c;
  c.phoneme_vocab = phoneme_vocab;
  c.hidden = acoustic.hidden;
  c.encoder_blocks = acoustic.encoder_blocks;
  c.decoder_blocks = acoustic.decoder_blocks;
  c.heads = acoustic.heads;
  c.conv_filter = acoustic.conv_filter;
  c.conv_kernel = acoustic.conv_kernel;
  c.dropout = acoustic.dropout;
  c.duration_filter = acoustic.duration_filter;
  c.duration_kernel = acoustic.duration_kernel;
  c.mel_dims = acoustic.mel_dims;
  c.use_frontend = use_frontend;
  c.char_hidden = encoder.hidden;
  return c;
}

nn::OptimizerConfig RunConfig::AcousticOptimizer() const {
  nn::OptimizerConfig o;
  o.warmup_steps = training.warmup_steps;
  o.model_width = acoustic.hidden;
  o.lr_scale = training.lr_scale;
  return o;
}

}  // namespace prosody::pipeline

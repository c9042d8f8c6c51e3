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

#ifndef PROSODY_PIPELINE_EXPERIMENT_H_
#define PROSODY_PIPELINE_EXPERIMENT_H_

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "prosody/acoustic/training.h"
#include "prosody/durpretrain/pretrain.h"
#include "prosody/evalkit/report.h"
#include "prosody/frontend/training.h"
#include "prosody/frontend/vocab.h"
#include "prosody/lingdata/mel.h"
#include "prosody/pipeline/config.h"

namespace prosody::pipeline {

// Stage seeds, all derived from RunConfig::seed.
enum class Stream : uint64_t {
  kFrontendTrain = 1,
  kFrontendTest = 2,
  kEncoderInit = 3,
  kMlm = 4,
  kFinetune = 5,
  kTtsTrainCorpus = 10,
  kTtsTrainAudio = 11,
  kTtsTestCorpus = 12,
  kTtsTestAudio = 13,
  kPretrainCorpus = 20,
  kPretrainDurations = 21,
  kPretrainNoise = 22,
  kPretrainInit = 23,
  kPretrainRun = 24,
  kAcousticInit = 30,
  kTtsRun = 31,
};
uint64_t StreamSeed(const RunConfig& cfg, Stream s);

// Mel signatures are fixed across runs so that datasets of different seeds
// share one "speaker".
inline constexpr uint64_t kSignatureSeed = 7;

struct World {
  lingdata::CorpusSpec spec;
  lingdata::PhonemeInventory inv;
  lingdata::Lexicon lex;
  frontend::CharVocab vocab;
  lingdata::MelSignatures sig;

  static World Build();
};

struct FrontendData {
  std::vector<lingdata::AnnotatedSentence> train;
  std::vector<lingdata::AnnotatedSentence> test;
};
FrontendData MakeFrontendData(const RunConfig& cfg, const World& w);

inline const std::set<frontend::Task>& AllTasks() {
  static const std::set<frontend::Task> all{frontend::Task::kPolyphone, frontend::Task::kSegPos,
                                            frontend::Task::kProsody};
  return all;
}

struct TrainedFrontend {
  frontend::CharEncoder<float> encoder;
  frontend::MlmReport mlm;
  std::optional<frontend::FinetuneReport> finetune;
};
// Character MLM from scratch.
TrainedFrontend PretrainFrontend(const RunConfig& cfg, const World& w, const FrontendData& data);
// Adds heads for `tasks` and fine-tunes them jointly with equal weights.
frontend::FinetuneReport FinetuneFrontend(const RunConfig& cfg, const World& w,
                                          const FrontendData& data,
                                          const std::set<frontend::Task>& tasks,
                                          frontend::CharEncoder<float>& enc);

struct TtsData {
  std::vector<lingdata::AnnotatedSentence> train_sentences;
  std::vector<lingdata::AnnotatedSentence> test_sentences;
  std::vector<acoustic::TtsExample> train;
  std::vector<acoustic::TtsExample> test;
};
TtsData MakeTtsData(const RunConfig& cfg, const World& w);
// Returns a copy whose examples carry final-layer embeddings from `enc`.
TtsData WithCharEmbeddings(const TtsData& data, const World& w,
                           const frontend::CharEncoder<float>& enc);

struct PretrainData {
  std::vector<lingdata::DurationSample> train;
  std::vector<lingdata::DurationSample> heldout;
};
// Clean gold durations; `noisy` corrupts the training part with the
// configured noise. The held-out part is always clean.
PretrainData MakePretrainData(const RunConfig& cfg, const World& w, bool noisy);

struct PretrainRun {
  durpretrain::PretrainModel<float> model;
  durpretrain::PretrainReport report;
};
PretrainRun RunDurationPretrain(const RunConfig& cfg, const World& w, const PretrainData& data);

struct TtsRun {
  acoustic::AcousticModel<float> model;
  acoustic::TtsTrainReport report;
  size_t transferred = 0;
};
// Fresh model from the acoustic init seed, optional transfer, then training
// on data.train with held-out evaluation on data.test.
TtsRun TrainAcoustic(const RunConfig& cfg, const World& w, const TtsData& data,
                     bool use_frontend, const durpretrain::PretrainModel<float>* pretrained);

// Duration MAE on data.test and the PPH pause probe on data.test_sentences.
evalkit::EvalReport EvaluateAcoustic(const acoustic::AcousticModel<float>& model,
                                     const World& w, const TtsData& data,
                                     const frontend::CharEncoder<float>& g2p,
                                     const frontend::CharEncoder<float>* embedder);

// Mean |round(mean train duration) - gold| over test phonemes.
double ConstantDurationMae(const TtsData& data);

// Ablation systems of the acoustic model.
struct SystemPreset {
  std::string name;
  // none | bert (MLM only) | bert-multi (multi-task fine-tuned)
  std::string frontend = "none";
  // none | clean | noisy
  std::string pretrain = "none";
};
const std::vector<SystemPreset>& AblationPresets();
const SystemPreset& FindPreset(const std::string& name);

}  // namespace prosody::pipeline

#endif  // PROSODY_PIPELINE_EXPERIMENT_H_

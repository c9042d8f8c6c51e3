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

#ifndef PROSODY_ACOUSTIC_TRAINING_H_
#define PROSODY_ACOUSTIC_TRAINING_H_

#include <cstdint>
#include <utility>
#include <vector>

#include "prosody/acoustic/model.h"
#include "prosody/lingdata/corpus.h"
#include "prosody/lingdata/mel.h"

namespace prosody::acoustic {

// Gold skeleton, synthetic durations and mel for every sentence. Sentence i
// uses DeriveSeed(seed, i) for durations and mel noise.
std::vector<TtsExample> BuildTtsExamples(const std::vector<lingdata::AnnotatedSentence>& corpus,
                                         const lingdata::CorpusSpec& spec,
                                         const lingdata::Lexicon& lex,
                                         const lingdata::PhonemeInventory& inv,
                                         const lingdata::MelSignatures& sig, uint64_t seed);

struct TtsTrainConfig {
  int steps = 2000;
  int batch_size = 16;
  int log_every = 100;
  // Held-out duration MAE is measured every eval_every steps; 0 disables.
  int eval_every = 0;
  nn::OptimizerConfig optimizer;
};

struct TtsTrainReport {
  nn::LossCurve total;
  nn::LossCurve mel;
  nn::LossCurve dur;
  StepLosses first_step;
  StepLosses last_step;
  // (step, held-out duration MAE in frames)
  std::vector<std::pair<int, double>> heldout_dur_mae;

  // First evaluated step whose MAE is <= threshold, or -1.
  int StepsToReach(double threshold) const;
};

TtsTrainReport TrainTts(AcousticModel<float>& model, const std::vector<TtsExample>& train,
                        const std::vector<TtsExample>& heldout, const TtsTrainConfig& cfg,
                        uint64_t seed);

}  // namespace prosody::acoustic

#endif  // PROSODY_ACOUSTIC_TRAINING_H_

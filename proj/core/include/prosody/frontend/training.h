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

#ifndef PROSODY_FRONTEND_TRAINING_H_
#define PROSODY_FRONTEND_TRAINING_H_

#include <cstdint>
#include <map>
#include <set>
#include <vector>

#include "prosody/frontend/char_encoder.h"
#include "prosody/lingdata/corpus.h"
#include "prosody/lingdata/lexicon.h"
#include "prosody/nn/optim.h"

namespace prosody::frontend {

// Encoder-side view of one sentence. Polyphone labels index the lexicon's
// global reading space and are -1 at monophone characters.
struct FrontendExample {
  std::vector<int> char_ids;
  std::vector<int> polyphone;
  std::vector<int> seg_pos;
  std::vector<int> prosody;
};

// Throws kData when the sentence lacks the labels of a requested task.
FrontendExample MakeExample(const lingdata::AnnotatedSentence& s, const CharVocab& vocab,
                            const lingdata::Lexicon& lex, const std::set<Task>& tasks);
std::vector<FrontendExample> MakeExamples(const std::vector<lingdata::AnnotatedSentence>& corpus,
                                          const CharVocab& vocab, const lingdata::Lexicon& lex,
                                          const std::set<Task>& tasks);

struct MaskedIds {
  std::vector<int> ids;
  std::vector<bool> flags;
};

// Each non-special position is selected with probability `rate` and
// replaced by <mask>.
MaskedIds MaskCharacters(const std::vector<int>& ids, double rate, Rng& rng);

struct TrainConfig {
  int steps = 2000;
  int batch_size = 32;
  double mask_rate = 0.15;
  int log_every = 100;
  nn::OptimizerConfig optimizer;
};

struct TaskWeights {
  std::map<Task, double> weights;

  double Get(Task t) const;
  void Validate() const;  // weights >= 0
};

struct MlmReport {
  nn::LossCurve train;
  double initial_heldout_loss = 0;
  double final_heldout_loss = 0;
  double heldout_accuracy = 0;
  double chance_accuracy = 0;
};

struct MlmEval {
  double loss = 0;
  double accuracy = 0;
  long masked = 0;
};

// Held-out MLM loss / accuracy with masks drawn from `seed`.
MlmEval EvaluateMlm(const CharEncoder<float>& enc, const std::vector<FrontendExample>& data,
                    double mask_rate, uint64_t seed);

MlmReport PretrainCharMlm(CharEncoder<float>& enc, const std::vector<FrontendExample>& train,
                          const std::vector<FrontendExample>& heldout, const TrainConfig& cfg,
                          uint64_t seed);

struct FinetuneReport {
  std::map<Task, nn::LossCurve> task_losses;
  nn::LossCurve total;
  long steps = 0;
};

// Total loss = sum_t weight_t * CE_t; the polyphone term covers polyphone
// positions only. Missing heads are added. An empty task set is a no-op.
FinetuneReport Finetune(CharEncoder<float>& enc, const std::vector<FrontendExample>& train,
                        const std::set<Task>& tasks, const TaskWeights& weights,
                        const TrainConfig& cfg, uint64_t seed);

}  // namespace prosody::frontend

#endif  // PROSODY_FRONTEND_TRAINING_H_

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

#include "prosody/acoustic/training.h"

#include "prosody/common/batching.h"
#include "prosody/common/error.h"
#include "prosody/lingdata/duration.h"

namespace prosody::acoustic {

std::vector<TtsExample> BuildTtsExamples(const std::vector<lingdata::AnnotatedSentence>& corpus,
                                         const lingdata::CorpusSpec& spec,
                                         const lingdata::Lexicon& lex,
                                         const lingdata::PhonemeInventory& inv,
                                         const lingdata::MelSignatures& sig, uint64_t seed) {
  std::vector<TtsExample> out;
  out.reserve(corpus.size());
  for (size_t i = 0; i < corpus.size(); ++i) {
    const uint64_t s = DeriveSeed(seed, i);
    TtsExample ex;
    ex.sample = lingdata::SynthDurations(lingdata::G2pGold(corpus[i], lex, inv),
                                         corpus[i].prosody, spec.durations, inv, s);
    ex.mel = lingdata::SynthMel(ex.sample, sig, DeriveSeed(s, 1)).mel;
    out.push_back(std::move(ex));
  }
  return out;
}

int TtsTrainReport::StepsToReach(double threshold) const {
  for (const auto& [step, mae] : heldout_dur_mae) {
    if (mae <= threshold) return step;
  }
  return -1;
}

TtsTrainReport TrainTts(AcousticModel<float>& model, const std::vector<TtsExample>& train,
                        const std::vector<TtsExample>& heldout, const TtsTrainConfig& cfg,
                        uint64_t seed) {
  if (train.empty()) Fail(ErrorCategory::kData, "TTS training set is empty");
  TtsTrainReport report;
  nn::Adam<float> opt(model.Params(), cfg.optimizer);
  BatchSampler sampler(train.size(), cfg.batch_size, DeriveSeed(seed, 2));
  Rng dropout_rng(DeriveSeed(seed, 4));
  nn::LossWindow total_w(cfg.log_every), mel_w(cfg.log_every), dur_w(cfg.log_every);
  const bool use_frontend = model.config().use_frontend;
  for (int step = 1; step <= cfg.steps; ++step) {
    std::vector<const TtsExample*> items;
    for (size_t i : sampler.Next()) items.push_back(&train[i]);
    const StepLosses l =
        TrainStep(model, MakeBatch<float>(items, use_frontend), opt, dropout_rng);
    if (step == 1) report.first_step = l;
    report.last_step = l;
    total_w.Add(l.total, report.total);
    mel_w.Add(l.mel_mae, report.mel);
    dur_w.Add(l.dur_mae, report.dur);
    if (cfg.eval_every > 0 && !heldout.empty() &&
        (step % cfg.eval_every == 0 || step == cfg.steps)) {
      report.heldout_dur_mae.emplace_back(step, DurationMaeFrames(model, heldout));
    }
  }
  total_w.Flush(report.total);
  mel_w.Flush(report.mel);
  dur_w.Flush(report.dur);
  return report;
}

}  // namespace prosody::acoustic

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

#include "prosody/pipeline/experiment.h"

#include <cmath>

#include "prosody/common/error.h"
#include "prosody/evalkit/probe.h"
#include "prosody/frontend/inference.h"
#include "prosody/lingdata/duration.h"

namespace prosody::pipeline {

uint64_t StreamSeed(const RunConfig& cfg, Stream s) {
  return DeriveSeed(cfg.seed, static_cast<uint64_t>(s));
}

World World::Build() {
  lingdata::CorpusSpec spec = lingdata::CorpusSpec::Default();
  auto inv = lingdata::PhonemeInventory::Build(lingdata::InventoryConfig::Mandarin());
  lingdata::Lexicon lex = spec.BuildLexicon();
  frontend::CharVocab vocab(lex.Characters());
  auto sig = lingdata::MelSignatures::Build(inv, kSignatureSeed);
  return World{std::move(spec), std::move(inv), std::move(lex), std::move(vocab),
               std::move(sig)};
}

FrontendData MakeFrontendData(const RunConfig& cfg, const World& w) {
  FrontendData d;
  d.train = lingdata::GenerateCorpus(w.spec, cfg.data.frontend_train,
                                     StreamSeed(cfg, Stream::kFrontendTrain))
                .sentences;
  d.test = lingdata::GenerateCorpus(w.spec, cfg.data.frontend_test,
                                    StreamSeed(cfg, Stream::kFrontendTest))
               .sentences;
  return d;
}

TrainedFrontend PretrainFrontend(const RunConfig& cfg, const World& w, const FrontendData& data) {
  Rng rng(StreamSeed(cfg, Stream::kEncoderInit));
  TrainedFrontend out;
  out.encoder = frontend::CharEncoder<float>(
      cfg.EncoderConfig(w.vocab.size(), static_cast<int>(w.lex.PolyphoneLabels().size()),
                        w.spec.num_seg_pos_labels(), {}),
      rng);
  const auto train = frontend::MakeExamples(data.train, w.vocab, w.lex, {});
  const auto test = frontend::MakeExamples(data.test, w.vocab, w.lex, {});
  out.mlm = frontend::PretrainCharMlm(out.encoder, train, test, cfg.MlmTrainConfig(),
                                      StreamSeed(cfg, Stream::kMlm));
  return out;
}

frontend::FinetuneReport FinetuneFrontend(const RunConfig& cfg, const World& w,
                                          const FrontendData& data,
                                          const std::set<frontend::Task>& tasks,
                                          frontend::CharEncoder<float>& enc) {
  Rng rng(DeriveSeed(StreamSeed(cfg, Stream::kFinetune), 1));
  enc.AddHeads(tasks, rng);
  const auto train = frontend::MakeExamples(data.train, w.vocab, w.lex, tasks);
  return frontend::Finetune(enc, train, tasks, {}, cfg.FinetuneTrainConfig(),
                            StreamSeed(cfg, Stream::kFinetune));
}

TtsData MakeTtsData(const RunConfig& cfg, const World& w) {
  TtsData d;
  d.train_sentences = lingdata::GenerateCorpus(w.spec, cfg.data.tts_train,
                                               StreamSeed(cfg, Stream::kTtsTrainCorpus))
                          .sentences;
  d.test_sentences = lingdata::GenerateCorpus(w.spec, cfg.data.tts_test,
                                              StreamSeed(cfg, Stream::kTtsTestCorpus))
                         .sentences;
  d.train = acoustic::BuildTtsExamples(d.train_sentences, w.spec, w.lex, w.inv, w.sig,
                                       StreamSeed(cfg, Stream::kTtsTrainAudio));
  d.test = acoustic::BuildTtsExamples(d.test_sentences, w.spec, w.lex, w.inv, w.sig,
                                      StreamSeed(cfg, Stream::kTtsTestAudio));
  return d;
}

TtsData WithCharEmbeddings(const TtsData& data, const World& w,
                           const frontend::CharEncoder<float>& enc) {
  TtsData out = data;
  auto attach = [&](std::vector<acoustic::TtsExample>& ex,
                    const std::vector<lingdata::AnnotatedSentence>& sentences) {
    for (size_t i = 0; i < ex.size(); ++i) {
      ex[i].char_embeddings = frontend::CharEmbeddings(enc, w.vocab.Encode(sentences[i].chars));
    }
  };
  attach(out.train, out.train_sentences);
  attach(out.test, out.test_sentences);
  return out;
}

PretrainData MakePretrainData(const RunConfig& cfg, const World& w, bool noisy) {
  const auto corpus =
      lingdata::GenerateCorpus(w.spec, cfg.data.pretrain_train + cfg.data.pretrain_heldout,
                               StreamSeed(cfg, Stream::kPretrainCorpus))
          .sentences;
  const uint64_t dur_seed = StreamSeed(cfg, Stream::kPretrainDurations);
  PretrainData d;
  for (size_t i = 0; i < corpus.size(); ++i) {
    auto sample = lingdata::SynthDurations(lingdata::G2pGold(corpus[i], w.lex, w.inv),
                                           corpus[i].prosody, w.spec.durations, w.inv,
                                           DeriveSeed(dur_seed, i));
    (static_cast<int>(i) < cfg.data.pretrain_train ? d.train : d.heldout)
        .push_back(std::move(sample));
  }
  if (noisy) {
    d.train = lingdata::Corrupt(d.train, cfg.pretraining.noise, w.inv,
                                StreamSeed(cfg, Stream::kPretrainNoise));
  }
  return d;
}

PretrainRun RunDurationPretrain(const RunConfig& cfg, const World& w, const PretrainData& data) {
  Rng rng(StreamSeed(cfg, Stream::kPretrainInit));
  PretrainRun out{durpretrain::PretrainModel<float>(cfg.AcousticModelConfig(w.inv.size(), false),
                                                    rng),
                  {}};
  durpretrain::PretrainConfig pc;
  pc.steps = cfg.pretraining.steps;
  pc.batch_size = cfg.pretraining.batch_size;
  pc.mask_rate = cfg.pretraining.mask_rate;
  pc.log_every = cfg.training.log_every;
  pc.optimizer = cfg.AcousticOptimizer();
  out.report = durpretrain::Pretrain(out.model, data.train, data.heldout, pc,
                                     StreamSeed(cfg, Stream::kPretrainRun));
  return out;
}

TtsRun TrainAcoustic(const RunConfig& cfg, const World& w, const TtsData& data,
                     bool use_frontend, const durpretrain::PretrainModel<float>* pretrained) {
  Rng rng(StreamSeed(cfg, Stream::kAcousticInit));
  TtsRun out{acoustic::AcousticModel<float>(cfg.AcousticModelConfig(w.inv.size(), use_frontend),
                                            rng),
             {}, 0};
  if (pretrained != nullptr) out.transferred = durpretrain::TransferWeights(*pretrained, out.model);
  acoustic::TtsTrainConfig tc;
  tc.steps = cfg.training.steps;
  tc.batch_size = cfg.training.batch_size;
  tc.log_every = cfg.training.log_every;
  tc.eval_every = cfg.training.eval_every;
  tc.optimizer = cfg.AcousticOptimizer();
  out.report = acoustic::TrainTts(out.model, data.train, data.test, tc,
                                  StreamSeed(cfg, Stream::kTtsRun));
  return out;
}

evalkit::EvalReport EvaluateAcoustic(const acoustic::AcousticModel<float>& model,
                                     const World& w, const TtsData& data,
                                     const frontend::CharEncoder<float>& g2p,
                                     const frontend::CharEncoder<float>* embedder) {
  evalkit::EvalReport r;
  r.duration_mae = acoustic::DurationMaeFrames(model, data.test);
  r.pauses = evalkit::BoundaryPauseProbe(model, g2p, embedder, w.vocab, w.lex, w.inv,
                                         data.test_sentences);
  return r;
}

double ConstantDurationMae(const TtsData& data) {
  double sum = 0;
  long n = 0;
  for (const auto& ex : data.train) {
    for (int d : ex.sample.durations) {
      sum += d;
      ++n;
    }
  }
  if (n == 0) Fail(ErrorCategory::kData, "no training durations");
  const double c = std::round(sum / n);
  double err = 0;
  long m = 0;
  for (const auto& ex : data.test) {
    for (int d : ex.sample.durations) {
      err += std::abs(c - d);
      ++m;
    }
  }
  if (m == 0) Fail(ErrorCategory::kData, "no test durations");
  return err / m;
}

const std::vector<SystemPreset>& AblationPresets() {
  static const std::vector<SystemPreset> presets{
      {"base", "none", "none"},
      {"bert", "bert", "none"},
      {"bert-multi", "bert-multi", "none"},
      {"clean", "none", "clean"},
      {"noisy", "none", "noisy"},
      {"bert-multi+noisy", "bert-multi", "noisy"},
  };
  return presets;
}

const SystemPreset& FindPreset(const std::string& name) {
  for (const auto& p : AblationPresets()) {
    if (p.name == name) return p;
  }
  std::string known;
  for (const auto& p : AblationPresets()) known += (known.empty() ? "" : ", ") + p.name;
  Fail(ErrorCategory::kConfig, "preset: unknown name '" + name + "' (" + known + ")");
}

}  // namespace prosody::pipeline

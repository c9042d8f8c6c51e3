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

#include "prosody/pipeline/datasets.h"

#include <cstdio>

#include "prosody/common/error.h"
#include "prosody/lingdata/io.h"

namespace prosody::pipeline {

namespace fs = std::filesystem;

namespace {

std::string MelName(const char* split, size_t i) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "mel/%s_%05zu.mel", split, i);
  return buf;
}

fs::path Need(const fs::path& p) {
  if (!fs::exists(p)) Fail(ErrorCategory::kMissingArtifact, "expected " + p.string());
  return p;
}

std::vector<acoustic::TtsExample> LoadSplit(const fs::path& dir, const char* split) {
  const std::string s(split);
  auto durations = lingdata::LoadDurations(Need(dir / ("tts_" + s + "_dur.jsonl")));
  std::vector<acoustic::TtsExample> out(durations.size());
  for (size_t i = 0; i < durations.size(); ++i) {
    out[i].sample = std::move(durations[i]);
    out[i].mel = lingdata::LoadMel(Need(dir / MelName(split, i))).mel;
  }
  return out;
}

}  // namespace

GeneratedData GenerateAll(const RunConfig& cfg, const World& w) {
  GeneratedData d;
  d.frontend = MakeFrontendData(cfg, w);
  d.tts = MakeTtsData(cfg, w);
  d.pretrain_clean = MakePretrainData(cfg, w, false);
  d.pretrain_noisy = MakePretrainData(cfg, w, true);
  return d;
}

std::vector<fs::path> SaveGenerated(const fs::path& dir, const GeneratedData& data,
                                    const World& w) {
  fs::create_directories(dir / "mel");
  std::vector<fs::path> files;
  auto corpus = [&](const char* name, const std::vector<lingdata::AnnotatedSentence>& s) {
    lingdata::SaveCorpus(dir / name, s, w.spec.pos_names);
    files.emplace_back(name);
  };
  auto durations = [&](const char* name, const std::vector<lingdata::DurationSample>& s) {
    lingdata::SaveDurations(dir / name, s);
    files.emplace_back(name);
  };
  auto tts = [&](const char* split, const std::vector<acoustic::TtsExample>& ex) {
    std::vector<lingdata::DurationSample> samples;
    for (size_t i = 0; i < ex.size(); ++i) {
      samples.push_back(ex[i].sample);
      lingdata::SaveMel(dir / MelName(split, i), lingdata::MelSample{ex[i].mel});
      files.emplace_back(MelName(split, i));
    }
    durations((std::string("tts_") + split + "_dur.jsonl").c_str(), samples);
  };
  corpus("frontend_train.jsonl", data.frontend.train);
  corpus("frontend_test.jsonl", data.frontend.test);
  corpus("tts_train.jsonl", data.tts.train_sentences);
  corpus("tts_test.jsonl", data.tts.test_sentences);
  tts("train", data.tts.train);
  tts("test", data.tts.test);
  durations("pretrain_clean.jsonl", data.pretrain_clean.train);
  durations("pretrain_noisy.jsonl", data.pretrain_noisy.train);
  durations("pretrain_heldout.jsonl", data.pretrain_clean.heldout);
  return files;
}

FrontendData LoadFrontendData(const fs::path& dir, const World& w) {
  FrontendData d;
  d.train = lingdata::LoadCorpus(Need(dir / "frontend_train.jsonl"), w.spec.pos_names);
  d.test = lingdata::LoadCorpus(Need(dir / "frontend_test.jsonl"), w.spec.pos_names);
  return d;
}

TtsData LoadTtsData(const fs::path& dir, const World& w) {
  TtsData d;
  d.train_sentences = lingdata::LoadCorpus(Need(dir / "tts_train.jsonl"), w.spec.pos_names);
  d.test_sentences = lingdata::LoadCorpus(Need(dir / "tts_test.jsonl"), w.spec.pos_names);
  d.train = LoadSplit(dir, "train");
  d.test = LoadSplit(dir, "test");
  if (d.train.size() != d.train_sentences.size() || d.test.size() != d.test_sentences.size()) {
    Fail(ErrorCategory::kData, "TTS sentence and duration files disagree in " + dir.string());
  }
  return d;
}

PretrainData LoadPretrainData(const fs::path& dir, bool noisy) {
  PretrainData d;
  d.train = lingdata::LoadDurations(
      Need(dir / (noisy ? "pretrain_noisy.jsonl" : "pretrain_clean.jsonl")));
  d.heldout = lingdata::LoadDurations(Need(dir / "pretrain_heldout.jsonl"));
  return d;
}

}  // namespace prosody::pipeline

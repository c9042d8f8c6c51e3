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

#ifndef PROSODY_PIPELINE_DATASETS_H_
#define PROSODY_PIPELINE_DATASETS_H_

#include <filesystem>
#include <vector>

#include "prosody/pipeline/experiment.h"

namespace prosody::pipeline {

// On-disk layout of a generated data directory:
//   frontend_train.jsonl frontend_test.jsonl
//   tts_train.jsonl tts_test.jsonl                 corpus lines
//   tts_train_dur.jsonl tts_test_dur.jsonl         durations
//   mel/train_NNNNN.mel mel/test_NNNNN.mel
//   pretrain_clean.jsonl pretrain_noisy.jsonl pretrain_heldout.jsonl
struct GeneratedData {
  FrontendData frontend;
  TtsData tts;
  PretrainData pretrain_clean;
  PretrainData pretrain_noisy;  // shares the held-out part with clean
};

GeneratedData GenerateAll(const RunConfig& cfg, const World& w);
// Returns the list of files written, relative to `dir`.
std::vector<std::filesystem::path> SaveGenerated(const std::filesystem::path& dir,
                                                 const GeneratedData& data, const World& w);

FrontendData LoadFrontendData(const std::filesystem::path& dir, const World& w);
TtsData LoadTtsData(const std::filesystem::path& dir, const World& w);
PretrainData LoadPretrainData(const std::filesystem::path& dir, bool noisy);

}  // namespace prosody::pipeline

#endif  // PROSODY_PIPELINE_DATASETS_H_

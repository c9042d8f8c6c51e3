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

#ifndef PROSODY_TOOLS_COMMANDS_H_
#define PROSODY_TOOLS_COMMANDS_H_

#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "prosody/frontend/char_encoder.h"
#include "prosody/pipeline/experiment.h"
#include "workspace.h"

namespace prosody::tools {

struct Context {
  pipeline::RunConfig cfg;
  Workspace ws;
  pipeline::World world;
  // Run missing upstream stages instead of failing.
  bool build_upstream = false;

  Context(pipeline::RunConfig c, const std::filesystem::path& out)
      : cfg(std::move(c)), ws(out, cfg), world(pipeline::World::Build()) {}
};

// Stage directory names.
std::string FrontendStage(const std::set<frontend::Task>& tasks);
std::string PretrainStage(const std::string& kind);  // clean | noisy
std::string TtsStage(const std::string& preset);

void GenData(Context& ctx);
void PretrainCharLm(Context& ctx);
void FinetuneFrontend(Context& ctx, const std::set<frontend::Task>& tasks);
void PretrainDuration(Context& ctx, const std::string& kind);
void TrainTts(Context& ctx, const std::string& preset);

struct SynthesisRequest {
  std::string preset = "base";
  std::string text;  // characters; empty selects a held-out sentence
  int index = -1;    // held-out sentence; -1 picks the first with a PPH
  bool plot = false;
};
void Synthesize(Context& ctx, const SynthesisRequest& req);

// Front-end tables for every completed front-end stage and acoustic
// metrics for every completed TTS stage.
void Evaluate(Context& ctx);
// Trains (or reuses) every listed preset and writes one comparison table.
void Ablate(Context& ctx, const std::vector<std::string>& presets);

void PlotMel(const std::filesystem::path& mel, const std::filesystem::path& image, int scale);

}  // namespace prosody::tools

#endif  // PROSODY_TOOLS_COMMANDS_H_

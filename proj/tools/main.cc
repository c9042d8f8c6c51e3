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

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "spdlog/spdlog.h"

#include "commands.h"
#include "prosody/common/error.h"
#include "run_config.h"

namespace {

using prosody::ErrorCategory;

int ExitCode(ErrorCategory c) {
  switch (c) {
    case ErrorCategory::kInvalidArgument:
      return 2;
    case ErrorCategory::kConfig:
      return 3;
    case ErrorCategory::kMissingArtifact:
      return 4;
    case ErrorCategory::kData:
      return 5;
    case ErrorCategory::kShape:
      return 6;
    case ErrorCategory::kNumeric:
      return 7;
    case ErrorCategory::kIo:
      return 8;
  }
  return 1;
}

// One line on stderr: "error: <category>: <message>".
int Report(std::string_view category, std::string message, int code) {
  for (char& ch : message) {
    if (ch == '\n') ch = ' ';
  }
  std::fprintf(stderr, "error: %.*s: %s\n", static_cast<int>(category.size()), category.data(),
               message.c_str());
  return code;
}

struct CommonFlags {
  std::string config;
  std::string profile;
  std::string out = "runs/default";
  uint64_t seed = 0;
  bool seed_set = false;
};

prosody::pipeline::RunConfig Resolve(const CommonFlags& f) {
  prosody::pipeline::RunConfig cfg =
      f.config.empty() ? prosody::tools::ParseRunConfig("", f.profile)
                       : prosody::tools::LoadRunConfig(f.config, f.profile);
  if (f.seed_set) cfg.seed = f.seed;
  cfg.Validate();
  return cfg;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Prosody-aware TTS toy pipeline: data, front-end, duration pretraining, "
               "acoustic model, evaluation"};
  app.require_subcommand(1);
  CommonFlags flags;
  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--config", flags.config, "YAML run config");
    cmd->add_option("--profile", flags.profile, "paper | desk | ci (overrides the config)");
    cmd->add_option("--out", flags.out, "run directory")->capture_default_str();
    cmd->add_option("--seed", flags.seed, "overrides the config seed")
        ->each([&](const std::string&) { flags.seed_set = true; });
  };

  auto* gen = app.add_subcommand("gen-data", "generate corpora, durations and mels");
  add_common(gen);

  auto* charlm = app.add_subcommand("pretrain-charlm", "character masked-LM pretraining");
  add_common(charlm);

  std::string tasks = "polyphone,seg_pos,prosody";
  auto* ft = app.add_subcommand("finetune-frontend", "fine-tune front-end heads");
  add_common(ft);
  ft->add_option("--tasks", tasks, "comma list of polyphone, seg_pos, prosody")
      ->capture_default_str();

  std::string preset;
  auto* pre = app.add_subcommand("pretrain-duration", "duration predictor pretraining");
  add_common(pre);
  pre->add_option("--preset", preset, "clean | noisy")->required();

  auto* tts = app.add_subcommand("train-tts", "train one acoustic system");
  add_common(tts);
  tts->add_option("--preset", preset,
                  "base | bert | bert-multi | clean | noisy | bert-multi+noisy")
      ->required();

  prosody::tools::SynthesisRequest synth;
  auto* syn = app.add_subcommand("synthesize", "synthesize one sentence");
  add_common(syn);
  syn->add_option("--preset", synth.preset, "trained system")->capture_default_str();
  syn->add_option("--text", synth.text, "input characters");
  syn->add_option("--index", synth.index, "held-out sentence index");
  syn->add_flag("--plot", synth.plot, "also write a PGM image of the mel");

  auto* eval = app.add_subcommand("evaluate", "evaluate every completed stage");
  add_common(eval);

  std::vector<std::string> presets;
  auto* abl = app.add_subcommand("ablate", "train and compare acoustic systems");
  add_common(abl);
  abl->add_option("--preset", presets, "systems to compare (default: all six)")
      ->delimiter(',');

  std::string mel_path, image_path;
  int scale = 2;
  auto* plot = app.add_subcommand("plot-mel", "render a mel file as a PGM image");
  plot->add_option("--mel", mel_path, "mel file")->required();
  plot->add_option("--image", image_path, "output .pgm")->required();
  plot->add_option("--scale", scale, "pixels per frame and bin")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return Report("invalid-argument", e.what(), 2);
  }

  spdlog::set_pattern("[%H:%M:%S] %v");
  try {
    if (plot->parsed()) {
      prosody::tools::PlotMel(mel_path, image_path, scale);
      return 0;
    }
    prosody::tools::Context ctx(Resolve(flags), flags.out);
    if (gen->parsed()) {
      prosody::tools::GenData(ctx);
    } else if (charlm->parsed()) {
      prosody::tools::PretrainCharLm(ctx);
    } else if (ft->parsed()) {
      prosody::tools::FinetuneFrontend(ctx, prosody::frontend::ParseTasks(tasks));
    } else if (pre->parsed()) {
      prosody::tools::PretrainDuration(ctx, preset);
    } else if (tts->parsed()) {
      prosody::tools::TrainTts(ctx, preset);
    } else if (syn->parsed()) {
      prosody::tools::Synthesize(ctx, synth);
    } else if (eval->parsed()) {
      prosody::tools::Evaluate(ctx);
    } else if (abl->parsed()) {
      if (presets.empty()) {
        for (const auto& p : prosody::pipeline::AblationPresets()) presets.push_back(p.name);
      }
      prosody::tools::Ablate(ctx, presets);
    }
  } catch (const prosody::Error& e) {
    return Report(prosody::CategoryName(e.category()), e.what(), ExitCode(e.category()));
  } catch (const std::exception& e) {
    return Report("internal", e.what(), 1);
  }
  return 0;
}

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

#include "workspace.h"

#include <fstream>
#include <sstream>

#include "json.hpp"

#include "prosody/common/error.h"
#include "run_config.h"

namespace prosody::tools {

namespace fs = std::filesystem;

namespace {

std::string ReadText(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteText(const fs::path& p, const std::string& text) {
  std::ofstream out(p, std::ios::binary);
  out << text;
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + p.string());
}

}  // namespace

Workspace::Workspace(fs::path root, const pipeline::RunConfig& cfg)
    : root_(std::move(root)), config_text_(EmitRunConfig(cfg)), seed_(cfg.seed) {}

bool Workspace::IsComplete(const std::string& stage) const {
  const fs::path manifest = ManifestPath(stage);
  const fs::path config = StageDir(stage) / "config.yaml";
  if (!fs::exists(manifest) || !fs::exists(config)) return false;
  if (ReadText(config) != config_text_) return false;
  try {
    const auto j = nlohmann::json::parse(ReadText(manifest));
    return j.value("status", "") == "complete";
  } catch (const nlohmann::json::exception&) {
    return false;
  }
}

fs::path Workspace::Require(const std::string& stage) const {
  if (!IsComplete(stage)) {
    Fail(ErrorCategory::kMissingArtifact,
         "expected " + ManifestPath(stage).string() +
             " (run the producing command with the same config first)");
  }
  return StageDir(stage);
}

fs::path Workspace::Begin(const std::string& stage) const {
  const fs::path dir = StageDir(stage);
  std::error_code ec;
  fs::remove_all(dir, ec);
  fs::create_directories(dir);
  WriteText(dir / "config.yaml", config_text_);
  return dir;
}

void Workspace::Complete(const std::string& stage, const std::vector<fs::path>& files,
                         const std::vector<std::string>& upstream,
                         const evalkit::Records& metrics) const {
  const fs::path dir = StageDir(stage);
  evalkit::WriteRecords(dir / "metrics.txt", metrics);
  nlohmann::json j;
  j["stage"] = stage;
  j["status"] = "complete";
  j["seed"] = seed_;
  j["config"] = "config.yaml";
  j["metrics"] = "metrics.txt";
  j["upstream"] = upstream;
  auto& list = j["files"] = nlohmann::json::array();
  for (const auto& f : files) {
    const fs::path p = dir / f;
    if (!fs::exists(p)) Fail(ErrorCategory::kIo, "manifest lists missing file " + p.string());
    list.push_back({{"path", f.generic_string()},
                    {"bytes", fs::is_regular_file(p) ? fs::file_size(p) : 0}});
  }
  WriteText(dir / "manifest.json", j.dump(2) + "\n");
}

}  // namespace prosody::tools

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

#ifndef PROSODY_TOOLS_WORKSPACE_H_
#define PROSODY_TOOLS_WORKSPACE_H_

#include <filesystem>
#include <string>
#include <vector>

#include "prosody/evalkit/report.h"
#include "prosody/pipeline/config.h"

namespace prosody::tools {

// A run directory holding one subdirectory per stage. Every stage directory
// gets config.yaml (resolved), metrics.txt and manifest.json. A stage counts
// as complete when its manifest says so and its config.yaml matches the
// current resolved config byte for byte.
class Workspace {
 public:
  Workspace(std::filesystem::path root, const pipeline::RunConfig& cfg);

  const std::filesystem::path& root() const { return root_; }
  std::filesystem::path StageDir(const std::string& stage) const { return root_ / stage; }
  std::filesystem::path ManifestPath(const std::string& stage) const {
    return StageDir(stage) / "manifest.json";
  }

  bool IsComplete(const std::string& stage) const;
  // Throws kMissingArtifact naming the expected manifest.
  std::filesystem::path Require(const std::string& stage) const;

  // Clears the stage directory and writes config.yaml.
  std::filesystem::path Begin(const std::string& stage) const;
  // Writes metrics.txt, then manifest.json listing `files` (relative to the
  // stage directory) and the upstream stages.
  void Complete(const std::string& stage, const std::vector<std::filesystem::path>& files,
                const std::vector<std::string>& upstream,
                const evalkit::Records& metrics) const;

 private:
  std::filesystem::path root_;
  std::string config_text_;
  uint64_t seed_;
};

}  // namespace prosody::tools

#endif  // PROSODY_TOOLS_WORKSPACE_H_

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

#ifndef PROSODY_TOOLS_RUN_CONFIG_H_
#define PROSODY_TOOLS_RUN_CONFIG_H_

#include <filesystem>
#include <string>

#include "prosody/pipeline/config.h"

namespace prosody::tools {

// Reads a nested key-value YAML file. The optional top-level `profile` key
// selects the defaults; every other key overrides one field. Unknown keys
// and values of the wrong type are kConfig errors naming the field.
pipeline::RunConfig LoadRunConfig(const std::filesystem::path& path,
                                  const std::string& profile_override);
pipeline::RunConfig ParseRunConfig(const std::string& yaml_text,
                                   const std::string& profile_override);

// Fully resolved config, every field present.
std::string EmitRunConfig(const pipeline::RunConfig& cfg);

}  // namespace prosody::tools

#endif  // PROSODY_TOOLS_RUN_CONFIG_H_

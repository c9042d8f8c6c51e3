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

#ifndef PROSODY_TOOLS_PLOT_H_
#define PROSODY_TOOLS_PLOT_H_

#include <filesystem>
#include <vector>

#include "prosody/nn/tensor.h"

namespace prosody::tools {

// Binary PGM (P5): frames left to right, mel bin 0 at the bottom, values
// min-max scaled to 0..255. Each frame is `scale` pixels wide and each bin
// `scale` pixels tall. Frames listed in `marks` get a white top tick.
void WriteMelPgm(const std::filesystem::path& path, const nn::Matrix<float>& mel, int scale = 2,
                 const std::vector<int>& marks = {});

}  // namespace prosody::tools

#endif  // PROSODY_TOOLS_PLOT_H_

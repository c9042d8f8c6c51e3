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

#include "plot.h"

#include <algorithm>
#include <fstream>
#include <string>

#include "prosody/common/error.h"

namespace prosody::tools {

void WriteMelPgm(const std::filesystem::path& path, const nn::Matrix<float>& mel, int scale,
                 const std::vector<int>& marks) {
  if (mel.rows() == 0 || mel.cols() == 0) Fail(ErrorCategory::kInvalidArgument, "empty mel");
  if (scale < 1) Fail(ErrorCategory::kInvalidArgument, "plot scale must be >= 1");
  const int frames = static_cast<int>(mel.rows());
  const int bins = static_cast<int>(mel.cols());
  const int width = frames * scale;
  const int tick = 3;
  const int height = bins * scale + tick;
  const float lo = mel.minCoeff();
  const float hi = mel.maxCoeff();
  const float range = hi > lo ? hi - lo : 1.0f;
  std::vector<unsigned char> img(static_cast<size_t>(width) * height, 0);
  for (int m : marks) {
    if (m < 0 || m >= frames) continue;
    for (int y = 0; y < tick; ++y) {
      for (int dx = 0; dx < scale; ++dx) img[static_cast<size_t>(y) * width + m * scale + dx] = 255;
    }
  }
  for (int t = 0; t < frames; ++t) {
    for (int b = 0; b < bins; ++b) {
      const auto v = static_cast<unsigned char>(
          std::clamp(255.0f * (mel(t, b) - lo) / range, 0.0f, 255.0f));
      const int y0 = tick + (bins - 1 - b) * scale;
      for (int dy = 0; dy < scale; ++dy) {
        for (int dx = 0; dx < scale; ++dx) {
          img[static_cast<size_t>(y0 + dy) * width + t * scale + dx] = v;
        }
      }
    }
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) Fail(ErrorCategory::kIo, "cannot write " + path.string());
  out << "P5\n" << width << " " << height << "\n255\n";
  out.write(reinterpret_cast<const char*>(img.data()), static_cast<std::streamsize>(img.size()));
  if (!out) Fail(ErrorCategory::kIo, "write failed: " + path.string());
}

}  // namespace prosody::tools

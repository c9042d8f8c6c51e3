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

#include "prosody/nn/optim.h"

#include <algorithm>

namespace prosody::nn {

void OptimizerConfig::Validate() const {
  if (!(beta1 > 0.0 && beta1 < 1.0) || !(beta2 > 0.0 && beta2 < 1.0)) {
    Fail(ErrorCategory::kConfig, "optimizer betas must lie in (0,1)");
  }
  if (!(epsilon > 0.0)) Fail(ErrorCategory::kConfig, "optimizer epsilon must be > 0");
  if (warmup_steps < 1) Fail(ErrorCategory::kConfig, "warmup_steps must be >= 1");
  if (model_width < 1) Fail(ErrorCategory::kConfig, "model_width must be >= 1");
}

double NoamLearningRate(long step, long warmup, long width) {
  if (step < 1) {
    Fail(ErrorCategory::kInvalidArgument,
         "learning-rate schedule is defined for step >= 1, got " + std::to_string(step));
  }
  if (warmup < 1 || width < 1) {
    Fail(ErrorCategory::kInvalidArgument, "warmup and width must be >= 1");
  }
  const double s = static_cast<double>(step);
  const double w = static_cast<double>(warmup);
  return std::pow(static_cast<double>(width), -0.5) *
         std::min(std::pow(s, -0.5), s * std::pow(w, -1.5));
}

}  // namespace prosody::nn

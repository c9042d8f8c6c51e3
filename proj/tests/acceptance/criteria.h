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

#ifndef PROSODY_TESTS_ACCEPTANCE_CRITERIA_H_
#define PROSODY_TESTS_ACCEPTANCE_CRITERIA_H_

#include <map>
#include <memory>
#include <optional>
#include <string>

#include "prosody/pipeline/experiment.h"

namespace prosody::acceptance {

struct Outcome {
  bool pass = false;
  std::string detail;
};

// Tolerances. Changing any of these changes what the suite certifies.
inline constexpr double kGradRelTol = 1e-4;
inline constexpr double kFormulaTol = 1e-6;
inline constexpr double kMinPolyphoneAccuracy = 0.95;
inline constexpr double kMinSpanF1 = 0.90;
inline constexpr double kMinPphF1 = 0.85;
// Held-out duration MAE (frames) the transferred and random-init systems race to.
inline constexpr double kTargetDurMae = 0.8;
inline constexpr double kMaxCleanNoisyGap = 0.10;
inline constexpr double kMinPphHitRate = 0.90;
inline constexpr double kPauseBandLo = 6.0;
inline constexpr double kPauseBandHi = 10.0;
inline constexpr double kMaxLossRatio = 0.5;
inline constexpr double kMaxMaeVsConstant = 0.30;
inline constexpr int kSanitySteps = 2000;
inline constexpr int kSeedsNeeded = 2;

Outcome GradientCorrectness();
Outcome MechanismInvariants();
Outcome FormulaSpotChecks();

// C3-C6 share trained models; everything is built lazily on first use.
class LearningSuite {
 public:
  explicit LearningSuite(int seeds);
  ~LearningSuite();

  Outcome FrontendLearning();
  Outcome PretrainingBenefit();
  Outcome ProsodyProbe();
  Outcome TrainingSanity();

 private:
  struct SeedRuns;
  pipeline::RunConfig ConfigFor(uint64_t seed) const;
  const frontend::CharEncoder<float>& Frontend();
  SeedRuns& Runs(uint64_t seed);

  int seeds_;
  pipeline::World world_;
  std::unique_ptr<pipeline::TrainedFrontend> frontend_;
  std::optional<evalkit::EvalReport> frontend_report_;
  double frontend_seconds_ = 0;
  std::map<uint64_t, std::unique_ptr<SeedRuns>> runs_;
};

}  // namespace prosody::acceptance

#endif  // PROSODY_TESTS_ACCEPTANCE_CRITERIA_H_

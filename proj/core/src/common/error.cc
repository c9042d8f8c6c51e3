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

#include "prosody/common/error.h"

namespace prosody {

std::string_view CategoryName(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::kInvalidArgument:
      return "invalid-argument";
    case ErrorCategory::kShape:
      return "shape";
    case ErrorCategory::kData:
      return "data";
    case ErrorCategory::kConfig:
      return "config";
    case ErrorCategory::kMissingArtifact:
      return "missing-artifact";
    case ErrorCategory::kNumeric:
      return "numeric";
    case ErrorCategory::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace prosody

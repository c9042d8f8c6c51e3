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

#ifndef PROSODY_COMMON_ERROR_H_
#define PROSODY_COMMON_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace prosody {

// Coarse failure classes. The CLI prints the category name as the first
// token of its single-line error report.
enum class ErrorCategory {
  kInvalidArgument,
  kShape,
  kData,
  kConfig,
  kMissingArtifact,
  kNumeric,
  kIo,
};

std::string_view CategoryName(ErrorCategory category);

class Error : public std::runtime_error {
 public:
  Error(ErrorCategory category, const std::string& message)
      : std::runtime_error(message), category_(category) {}

  ErrorCategory category() const { return category_; }

 private:
  ErrorCategory category_;
};

[[noreturn]] inline void Fail(ErrorCategory category, const std::string& msg) {
  throw Error(category, msg);
}

}  // namespace prosody

#endif  // PROSODY_COMMON_ERROR_H_

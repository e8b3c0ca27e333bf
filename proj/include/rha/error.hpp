/*
 * Copyright 2026 The RHA Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rha {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kNotSpd,
  kDowndateBreakdown,
  kEmptyMachineSet,
  kAlreadyHuman,
  kHypothesisViolated,
  kAllZeroCosts,
  kTooLarge,
  kBudgetTooLarge,
  kInvalidScore,
  kEmptyScores,
  kTooSmall,
  kNoWeights,
  kInvalidAlpha,
  kParse,
  kIo,
  kAuditFailed,
};

std::string_view error_code_name(ErrorCode code);

// Single exception type for the library; the code identifies the contract
// that was violated so callers (and the C API) can branch on it.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace rha

// Copyright 2026 The peergroup Authors
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

#ifndef PEERGROUP_ERROR_HPP_
#define PEERGROUP_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace peergroup {

enum class ErrorCode {
  kBadInput,
  kInfeasiblePartition,
  kInfeasibleBounds,
  kUnsatisfiableConstraints,
  kInstanceTooLarge,
  kTimeBudgetZero,
  kNoFeasibleSplit,
  kUnnormalizedInput,
  kBadDegree,
  kInfeasibleS,
  kSinkUnwritable,
  kNotFound,
  kConflictingUpdate,
  kStorageFull,
  kCancelled,
};

// Stable snake_case name used in machine-readable error payloads.
std::string_view error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace peergroup

#endif  // PEERGROUP_ERROR_HPP_

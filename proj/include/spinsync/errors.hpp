// Copyright 2026 The spinsync Authors
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

#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

namespace spinsync {

enum class ErrorCode {
  kOk = 0,
  kInvalidConfig,
  kSingularCoupling,
  kNonFinite,
  kHPBreakdown,
  kPSDViolation,
  kDegenerateOrbit,
  kDegenerateCovariance,
  kEmptyWindow,
  kIo,
};

const char* error_code_name(ErrorCode code);

/// Exception carried through the C++ core. `time` is the simulation time at
/// which the failure was detected, or NaN when no time applies.
class SimError : public std::runtime_error {
 public:
  SimError(ErrorCode code, const std::string& what, double time = std::nan(""))
      : std::runtime_error(what), code_(code), time_(time) {}

  ErrorCode code() const noexcept { return code_; }
  double time() const noexcept { return time_; }

 private:
  ErrorCode code_;
  double time_;
};

}  // namespace spinsync

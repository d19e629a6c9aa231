// Copyright 2026 The agm Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//    http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef AGM_ERRORS_HPP
#define AGM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace agm {

struct InvalidParameterError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Thrown when an iteration produces a non-finite state or the objective
// gap blows past the divergence guard. Carries the first bad iteration.
struct DivergedError : std::runtime_error {
  DivergedError(const std::string& what, long long k)
      : std::runtime_error(what + " (first bad iteration k=" + std::to_string(k) + ")"),
        first_bad_k(k) {}
  long long first_bad_k;
};

// A single-variable form that cannot be expressed in the three-variable
// parameterization (c1^2 <= 4*c0).
struct NotRepresentableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A monitor was asked to certify something outside its preconditions,
// e.g. a non-monotone weight ratio for which no Lyapunov choice applies.
struct NotApplicableError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct InfeasibleStepError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractViolationError : std::logic_error {
  using std::logic_error::logic_error;
};

struct ConfigError : std::runtime_error {
  ConfigError(const std::string& what, int line) : std::runtime_error(what), line_number(line) {}
  explicit ConfigError(const std::string& what) : std::runtime_error(what), line_number(0) {}
  int line_number;
};

}  // namespace agm

#endif  // AGM_ERRORS_HPP

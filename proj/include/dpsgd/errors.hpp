//
// Copyright 2026 The dpsgd-bounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#ifndef DPSGD_ERRORS_HPP_
#define DPSGD_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace dpsgd {

// Invalid argument or configuration field (maps to CLI exit code 2).
class parameter_error : public std::invalid_argument {
 public:
  explicit parameter_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// Malformed or inconsistent config input (maps to CLI exit code 2).
class config_error : public std::invalid_argument {
 public:
  explicit config_error(const std::string& what)
      : std::invalid_argument(what) {}
};

// A calibration target that cannot be met inside the search bracket
// (maps to CLI exit code 1).
class calibration_error : public std::runtime_error {
 public:
  explicit calibration_error(const std::string& what)
      : std::runtime_error(what) {}
};

}  // namespace dpsgd

#endif  // DPSGD_ERRORS_HPP_

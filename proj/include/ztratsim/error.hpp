// Copyright 2026 The ztratsim Authors
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

#include <stdexcept>
#include <string>

namespace ztratsim {

/// Base class for all errors raised by library operations.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// A caller violated an operation precondition (bad weights, negative dt, ...).
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// A referenced RAT, flow, or entry does not exist in the active registry.
class LookupError : public Error {
 public:
  using Error::Error;
};

/// Loaded configuration is internally inconsistent (verify cost >= full cost,
/// improved survival below base, ...).
class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace ztratsim

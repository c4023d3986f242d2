// Copyright 2026 The ioncat Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at

//     http://www.apache.org/licenses/LICENSE-2.0

// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace ioncat {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// A precondition on an argument was violated (bad ion count, non-finite parameter, ...).
class InvalidArgument : public Error {
  public:
    using Error::Error;
};

/// The truncated Fock space cannot represent the requested state or operation.
class TruncationError : public Error {
  public:
    using Error::Error;
};

/// Generalized displacement requested beyond the configured maximum order.
class UnsupportedOrder : public Error {
  public:
    using Error::Error;
};

/// Post-selection onto an outcome whose probability is numerically zero.
class DegenerateOutcome : public Error {
  public:
    using Error::Error;
};

/// Fixed-step integration failed its step-halving check.
class ConvergenceError : public Error {
  public:
    using Error::Error;
};

/// Malformed or schema-violating configuration document.
class ConfigError : public Error {
  public:
    using Error::Error;
};

} // namespace ioncat

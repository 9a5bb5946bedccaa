// Copyright 2026 the ucal authors
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

namespace ucal {

// Precondition or invariant violation on user-supplied values.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Input data failed validation (row sums, negative entries, label range).
class ValidationError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Invalid algorithm configuration, e.g. a non-positive tolerance.
class ConfigError : public DomainError {
 public:
  using DomainError::DomainError;
};

// A brute-force routine was asked to run above its size guard.
class GuardError : public std::length_error {
 public:
  using std::length_error::length_error;
};

// File could not be opened, read, parsed or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ucal

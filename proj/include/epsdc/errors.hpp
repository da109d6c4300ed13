// Copyright 2026 The epsdc Authors.
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

namespace epsdc {

// Base of every error thrown by the library. The CLI maps the subclasses onto
// exit codes: input-like errors exit 2, numerical/capacity errors exit 3.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed or schema-violating JSON. `what()` carries the JSON path.
class ParseError : public InputError {
 public:
  using InputError::InputError;
};

// A modulus h was supplied with h(0) != 0.
class ModulusError : public InputError {
 public:
  ModulusError(const std::string& msg, double value_at_origin)
      : InputError(msg), value_at_origin_(value_at_origin) {}
  double value_at_origin() const noexcept { return value_at_origin_; }

 private:
  double value_at_origin_;
};

class UnsupportedConditionError : public InputError {
 public:
  using InputError::InputError;
};

class NumericalError : public Error {
 public:
  using Error::Error;
};

class CapacityError : public Error {
 public:
  using Error::Error;
};

}  // namespace epsdc

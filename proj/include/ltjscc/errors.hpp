// Copyright 2026 The ltjscc Authors
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

namespace ltjscc {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Invalid parameters or configuration values.
class ConfigError : public Error {
public:
  using Error::Error;
};

// Malformed input files and I/O failures.
class ParseError : public Error {
public:
  using Error::Error;
};

// Inconsistent structures: mismatched lengths, out-of-range indices.
class StructuralError : public Error {
public:
  using Error::Error;
};

// A design target that cannot be reached. Carries the achievable interval.
class InfeasibleError : public Error {
public:
  InfeasibleError(const std::string &what, double lo, double hi)
      : Error(what), lo_(lo), hi_(hi) {}

  double achievable_low() const noexcept { return lo_; }
  double achievable_high() const noexcept { return hi_; }

private:
  double lo_;
  double hi_;
};

} // namespace ltjscc

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

#include <cstdint>
#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace ltjscc {

// Shortest round-trip-safe text for a double: 17 significant digits.
std::string format_real(double value);

/// Comma-separated output with '#' comment lines and LF line endings.
class CsvWriter {
public:
  using Cell = std::variant<double, std::int64_t, std::uint64_t, std::string>;

  explicit CsvWriter(std::ostream &out) : out_(out) {}

  void comment(std::string_view text);
  void header(std::initializer_list<std::string_view> columns);
  void row(const std::vector<Cell> &cells);

private:
  std::ostream &out_;
};

} // namespace ltjscc

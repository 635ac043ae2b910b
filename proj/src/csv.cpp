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

#include "ltjscc/csv.hpp"

#include <cstdio>

namespace ltjscc {

std::string format_real(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

void CsvWriter::comment(std::string_view text) {
  out_ << "# " << text << '\n';
}

void CsvWriter::header(std::initializer_list<std::string_view> columns) {
  bool first = true;
  for (std::string_view c : columns) {
    if (!first)
      out_ << ',';
    out_ << c;
    first = false;
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell> &cells) {
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i > 0)
      out_ << ',';
    std::visit(
        [&](const auto &v) {
          using T = std::decay_t<decltype(v)>;
          if constexpr (std::is_same_v<T, double>)
            out_ << format_real(v);
          else
            out_ << v;
        },
        cells[i]);
  }
  out_ << '\n';
}

} // namespace ltjscc

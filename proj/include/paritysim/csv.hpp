// Copyright 2026 The paritysim Authors
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

#ifndef PARITYSIM_CSV_HPP
#define PARITYSIM_CSV_HPP

#include <initializer_list>
#include <string>
#include <string_view>
#include <vector>

namespace paritysim {

/// Locale-independent shortest form with at most 12 significant digits.
std::string format_number(double value);

/// Locale-independent parse; throws DomainError on trailing garbage.
double parse_number(std::string_view text);

/// Row-oriented CSV builder. Cells never contain commas or quotes here, so no
/// escaping is done.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);

    CsvTable& add_row(std::vector<std::string> cells);
    /// Convenience for rows that mix labels and numbers.
    static std::string cell(double value) { return format_number(value); }

    const std::vector<std::string>& header() const noexcept { return header_; }
    std::size_t rows() const noexcept { return rows_.size(); }

    std::string str() const;

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

}  // namespace paritysim

#endif  // PARITYSIM_CSV_HPP

// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <istream>
#include <string>
#include <string_view>
#include <vector>

namespace evmg::csv {

struct Row {
    std::size_t line; // 1-based line in the source
    std::vector<std::string> fields;
};

struct Table {
    std::vector<std::string> header;
    std::vector<Row> rows;
};

/// Reads a comma-separated table with a header line. Blank lines are skipped;
/// fields are trimmed. No quoting: none of our schemas need it.
Table read(std::istream& in, std::string_view source);

double to_double(const std::string& field, std::size_t line, std::string_view source);
int to_int(const std::string& field, std::size_t line, std::string_view source);

} // namespace evmg::csv

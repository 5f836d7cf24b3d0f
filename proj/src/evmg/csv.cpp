// SPDX-License-Identifier: Apache-2.0

#include "evmg/csv.hpp"

#include <charconv>
#include <cmath>

#include "evmg/errors.hpp"

namespace evmg::csv {

namespace {

std::string trim(std::string_view s) {
    const auto* ws = " \t\r\n";
    auto b = s.find_first_not_of(ws);
    if (b == std::string_view::npos) return {};
    auto e = s.find_last_not_of(ws);
    return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

std::string where(std::string_view source, std::size_t line) {
    return std::string(source) + ":" + std::to_string(line) + ": ";
}

} // namespace

Table read(std::istream& in, std::string_view source) {
    Table table;
    std::string line;
    std::size_t lineno = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (trim(line).empty()) continue;
        if (!have_header) {
            table.header = split(line);
            have_header = true;
            continue;
        }
        table.rows.push_back({lineno, split(line)});
    }
    if (!have_header) throw ParseError(std::string(source) + ": empty file, expected a header");
    return table;
}

double to_double(const std::string& field, std::size_t line, std::string_view source) {
    double v = 0.0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end || !std::isfinite(v))
        throw ParseError(where(source, line) + "'" + field + "' is not a number", line);
    return v;
}

int to_int(const std::string& field, std::size_t line, std::string_view source) {
    int v = 0;
    const char* end = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(field.data(), end, v);
    if (field.empty() || ec != std::errc{} || ptr != end)
        throw ParseError(where(source, line) + "'" + field + "' is not an integer", line);
    return v;
}

} // namespace evmg::csv

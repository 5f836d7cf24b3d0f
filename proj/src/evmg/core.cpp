// SPDX-License-Identifier: Apache-2.0

#include "evmg/core.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <optional>

#include "evmg/errors.hpp"

namespace evmg {

ScenarioError::ScenarioError(std::vector<std::string> problems)
    : Error([&] {
          std::string msg = "scenario invalid:";
          for (const auto& p : problems) msg += "\n  - " + p;
          return msg;
      }()),
      problems_(std::move(problems)) {}

void TimeGrid::validate() const {
    if (slots_per_day < 1 || (24 * 60) % slots_per_day != 0)
        throw InvalidInput("slots_per_day must divide 1440 minutes, got " +
                           std::to_string(slots_per_day));
    if (slots_per_day * slot_hours != 24.0)
        throw InvalidInput("slots_per_day x slot_hours must equal 24 h");
}

TimeGrid TimeGrid::make(int slots_per_day) {
    TimeGrid g{slots_per_day, 24.0 / slots_per_day};
    g.validate();
    return g;
}

namespace {

std::optional<int> parse_int(std::string_view s) {
    if (s.empty()) return std::nullopt;
    int v = 0;
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
    return v;
}

} // namespace

ClockTime ClockTime::parse(std::string_view text) {
    auto colon = text.find(':');
    if (colon == std::string_view::npos || colon == 0 || colon > 2 ||
        text.size() - colon != 3)
        throw InvalidInput("clock time must be HH:MM, got '" + std::string(text) + "'");
    auto h = parse_int(text.substr(0, colon));
    auto m = parse_int(text.substr(colon + 1));
    if (!h || !m || *h < 0 || *m < 0 || *m > 59 || *h > 24 || (*h == 24 && *m != 0))
        throw InvalidInput("clock time out of range: '" + std::string(text) + "'");
    return hm(*h, *m);
}

std::string ClockTime::str() const {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

int slot_of_time(ClockTime clock, const TimeGrid& grid) {
    if (clock.minutes < 0 || clock.minutes >= 24 * 60)
        throw InvalidInput("clock time " + clock.str() + " outside [00:00, 24:00)");
    return clock.minutes / grid.minutes_per_slot();
}

ClockTime slot_start(int slot, const TimeGrid& grid) {
    check_slot(slot, grid);
    return ClockTime{slot * grid.minutes_per_slot()};
}

void check_slot(int slot, const TimeGrid& grid) {
    if (!grid.contains(slot))
        throw InvalidInput("slot " + std::to_string(slot) + " outside [0, " +
                           std::to_string(grid.slots_per_day) + ")");
}

std::vector<double> rasterize(const std::vector<Segment>& segments, const TimeGrid& grid) {
    const int n = grid.slots_per_day;
    const int step = grid.minutes_per_slot();
    std::vector<double> values(n, 0.0);
    std::vector<int> owner(n, -1);

    for (std::size_t k = 0; k < segments.size(); ++k) {
        const auto& seg = segments[k];
        for (ClockTime edge : {seg.from, seg.to}) {
            if (edge.minutes % step != 0)
                throw DefinitionError("segment boundary " + edge.str() +
                                      " is not on a slot edge");
        }
        if (seg.from.minutes == 24 * 60)
            throw DefinitionError("segment cannot start at 24:00");
        const int first = seg.from.minutes / step;
        const int last = seg.to.minutes / step; // exclusive, may equal n
        if (first == last % n && !(first == 0 && last == n))
            throw DefinitionError("segment " + seg.from.str() + "-" + seg.to.str() +
                                  " is empty");
        int count = first < last ? last - first : n - first + last;
        for (int i = 0; i < count; ++i) {
            int slot = (first + i) % n;
            if (owner[slot] >= 0)
                throw DefinitionError("segments overlap at " +
                                      ClockTime{slot * step}.str());
            owner[slot] = static_cast<int>(k);
            values[slot] = seg.value;
        }
    }
    for (int slot = 0; slot < n; ++slot) {
        if (owner[slot] < 0)
            throw DefinitionError("segments leave a gap at " + ClockTime{slot * step}.str());
    }
    return values;
}

std::string format_exact(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
    (void)ec;
    return std::string(buf, ptr);
}

std::string format_report(double value) {
    if (value == 0.0) value = 0.0; // drop negative zero
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", value);
    return buf;
}

double round_report(double value) {
    return std::strtod(format_report(value).c_str(), nullptr);
}

} // namespace evmg

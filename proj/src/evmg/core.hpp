// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace evmg {

/// Uniform discretisation of one circular day.
struct TimeGrid {
    int slots_per_day = 96;
    double slot_hours = 0.25;

    int minutes_per_slot() const { return 24 * 60 / slots_per_day; }
    int wrap(int slot) const {
        int r = slot % slots_per_day;
        return r < 0 ? r + slots_per_day : r;
    }
    bool contains(int slot) const { return slot >= 0 && slot < slots_per_day; }

    /// Throws InvalidInput unless slots_per_day * slot_hours is exactly one day
    /// and a slot is a whole number of minutes.
    void validate() const;

    static TimeGrid make(int slots_per_day);
};

/// Wall-clock time of day in whole minutes. 24:00 is representable so it can
/// close a window; slot_of_time rejects it.
struct ClockTime {
    int minutes = 0;

    static ClockTime hm(int hours, int mins) { return ClockTime{hours * 60 + mins}; }
    /// Accepts "H:MM" or "HH:MM", 00:00 through 24:00.
    static ClockTime parse(std::string_view text);

    double hours() const { return minutes / 60.0; }
    std::string str() const;

    friend bool operator==(ClockTime, ClockTime) = default;
    friend auto operator<=>(ClockTime, ClockTime) = default;
};

int slot_of_time(ClockTime clock, const TimeGrid& grid);
ClockTime slot_start(int slot, const TimeGrid& grid);

/// Throws InvalidInput when `slot` is not a valid index.
void check_slot(int slot, const TimeGrid& grid);

/// Half-open clock interval [from, to). `to < from` wraps midnight.
struct Segment {
    ClockTime from;
    ClockTime to;
    double value = 0.0;
};

/// Rasterises segments onto the grid. Every slot must be covered exactly once
/// and every boundary must land on a slot edge; otherwise DefinitionError.
std::vector<double> rasterize(const std::vector<Segment>& segments, const TimeGrid& grid);

/// Shortest decimal text that parses back to the same double.
std::string format_exact(double value);
/// Fixed nine significant digits, used for every reported number.
std::string format_report(double value);
/// `value` rounded to nine significant digits.
double round_report(double value);

} // namespace evmg

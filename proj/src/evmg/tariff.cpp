// SPDX-License-Identifier: Apache-2.0

#include "evmg/tariff.hpp"

#include <cmath>
#include <string>

#include "evmg/errors.hpp"

namespace evmg {

std::vector<Segment> default_dr_windows() {
    using C = ClockTime;
    return {
        {C::hm(23, 0), C::hm(9, 0), 0.055},
        {C::hm(9, 0), C::hm(10, 0), 0.108},
        {C::hm(10, 0), C::hm(12, 0), 0.179},
        {C::hm(12, 0), C::hm(13, 0), 0.108},
        {C::hm(13, 0), C::hm(17, 0), 0.179},
        {C::hm(17, 0), C::hm(23, 0), 0.108},
    };
}

TariffSchedule make_tariff(const std::vector<Segment>& grid_windows,
                           std::vector<double> pv_rate, const TimeGrid& grid) {
    TariffSchedule t{rasterize(grid_windows, grid), std::move(pv_rate)};
    validate(t, grid);
    return t;
}

TariffSchedule default_tariff(double pv_rate, const TimeGrid& grid) {
    return make_tariff(default_dr_windows(),
                       std::vector<double>(grid.slots_per_day, pv_rate), grid);
}

double tariff_rate(const TariffSchedule& schedule, PriceSource source, int slot) {
    const auto& rates = source == PriceSource::Grid ? schedule.grid_rate : schedule.pv_rate;
    if (slot < 0 || slot >= static_cast<int>(rates.size()))
        throw InvalidInput("tariff slot " + std::to_string(slot) + " out of range");
    return rates[slot];
}

void validate(const TariffSchedule& schedule, const TimeGrid& grid) {
    const auto n = static_cast<std::size_t>(grid.slots_per_day);
    if (schedule.grid_rate.size() != n || schedule.pv_rate.size() != n)
        throw InvalidInput("tariff arrays must have " + std::to_string(n) + " slots");
    for (const auto* rates : {&schedule.grid_rate, &schedule.pv_rate}) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!std::isfinite((*rates)[i]) || (*rates)[i] < 0.0)
                throw InvalidInput("tariff rate at slot " + std::to_string(i) +
                                   " must be finite and >= 0");
        }
    }
}

} // namespace evmg

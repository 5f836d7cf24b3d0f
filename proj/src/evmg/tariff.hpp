// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "evmg/core.hpp"

namespace evmg {

enum class PriceSource { Grid, Pv };

/// Per-slot prices in $/kWh: the time-of-use grid rate and the market price
/// paid for PV energy (and credited for EV discharge).
struct TariffSchedule {
    std::vector<double> grid_rate;
    std::vector<double> pv_rate;

    friend bool operator==(const TariffSchedule&, const TariffSchedule&) = default;
};

/// Three-tier time-of-use program: 0.055 off-peak (23:00-09:00), 0.108
/// mid-peak (09-10, 12-13, 17-23), 0.179 on-peak (10-12, 13-17).
std::vector<Segment> default_dr_windows();

TariffSchedule make_tariff(const std::vector<Segment>& grid_windows,
                           std::vector<double> pv_rate, const TimeGrid& grid);
TariffSchedule default_tariff(double pv_rate, const TimeGrid& grid);

double tariff_rate(const TariffSchedule& schedule, PriceSource source, int slot);

void validate(const TariffSchedule& schedule, const TimeGrid& grid);

} // namespace evmg

// SPDX-License-Identifier: Apache-2.0

#include "evmg/ev.hpp"

#include <algorithm>
#include <cmath>

#include "evmg/errors.hpp"

namespace evmg {

double mode_rate_kw(ChargeMode mode) {
    switch (mode) {
    case ChargeMode::M1: return 7.0;
    case ChargeMode::M2: return 19.2;
    }
    return 0.0;
}

std::string_view to_string(ChargeMode mode) {
    return mode == ChargeMode::M1 ? "M1" : "M2";
}

ChargeMode parse_charge_mode(std::string_view text) {
    if (text == "M1") return ChargeMode::M1;
    if (text == "M2") return ChargeMode::M2;
    throw InvalidInput("unknown charge mode '" + std::string(text) + "'");
}

SocStep soc_after(const EvState& state, double power_kw, const TimeGrid& grid) {
    const EvSpec& ev = state.spec;
    const double rate = ev.rate_kw();
    if (!std::isfinite(power_kw) || std::abs(power_kw) > rate * (1.0 + 1e-12))
        throw InvalidInput("power " + format_report(power_kw) + " kW exceeds " +
                           std::string(to_string(ev.mode)) + " rate for " + ev.id);

    // percent SoC per kWh stored in the battery
    const double pct_per_kwh = 100.0 / ev.capacity_kwh;
    if (power_kw > 0.0) {
        const double gain = pct_per_kwh * power_kw * grid.slot_hours * ev.charge_efficiency;
        if (state.soc + gain < ev.soc_max - kBoundSnap) return {state.soc + gain, power_kw};
        const double room = std::max(0.0, ev.soc_max - state.soc);
        const double delivered =
            room / (pct_per_kwh * grid.slot_hours * ev.charge_efficiency);
        return {std::max(state.soc, ev.soc_max), delivered};
    }
    if (power_kw < 0.0) {
        const double drop = pct_per_kwh * -power_kw * grid.slot_hours / ev.discharge_efficiency;
        if (state.soc - drop > ev.soc_min + kBoundSnap) return {state.soc - drop, power_kw};
        const double room = std::max(0.0, state.soc - ev.soc_min);
        const double delivered =
            room * ev.discharge_efficiency / (pct_per_kwh * grid.slot_hours);
        return {std::min(state.soc, ev.soc_min), -delivered};
    }
    return {state.soc, 0.0};
}

double charge_step_soc(const EvSpec& spec, const TimeGrid& grid) {
    return 100.0 * spec.rate_kw() * grid.slot_hours * spec.charge_efficiency /
           spec.capacity_kwh;
}

int parked_duration(const EvSpec& spec, const TimeGrid& grid) {
    return grid.wrap(spec.departure_slot - spec.arrival_slot);
}

bool is_parked(const EvSpec& spec, int slot, const TimeGrid& grid) {
    check_slot(slot, grid);
    return grid.wrap(slot - spec.arrival_slot) < parked_duration(spec, grid);
}

int slots_to_departure(const EvSpec& spec, int slot, const TimeGrid& grid) {
    if (!is_parked(spec, slot, grid)) return 0;
    return parked_duration(spec, grid) - grid.wrap(slot - spec.arrival_slot);
}

} // namespace evmg

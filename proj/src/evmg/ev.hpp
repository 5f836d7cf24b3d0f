// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <string>
#include <string_view>

#include "evmg/core.hpp"

namespace evmg {

/// Charger rating class. Discharge uses the same rate as charge.
enum class ChargeMode { M1, M2 };

double mode_rate_kw(ChargeMode mode);
std::string_view to_string(ChargeMode mode);
ChargeMode parse_charge_mode(std::string_view text);

/// Static description of one vehicle. SoC values are percent of capacity.
/// The parked interval is [arrival_slot, departure_slot) on the circular day.
struct EvSpec {
    std::string id;
    double capacity_kwh = 64.0;
    ChargeMode mode = ChargeMode::M1;
    int arrival_slot = 0;
    int departure_slot = 0;
    double initial_soc = 15.0;
    double target_soc = 80.0;
    double soc_min = 20.0;
    double soc_max = 80.0;
    double charge_efficiency = 1.0;
    double discharge_efficiency = 1.0;

    double rate_kw() const { return mode_rate_kw(mode); }

    friend bool operator==(const EvSpec&, const EvSpec&) = default;
};

struct EvState {
    const EvSpec& spec;
    double soc;
};

/// Tolerance, in percent SoC, under which the target counts as reached.
inline constexpr double kSocTolerance = 1e-9;

/// A step that would end within this many percent of soc_max (charging) or
/// soc_min (discharging) ends exactly on the bound instead, so rounding never
/// leaves a sliver of headroom that invites a near-zero action next slot.
inline constexpr double kBoundSnap = 1e-12;

struct SocStep {
    double soc;
    /// Power actually exchanged at the charger terminals, signed like the
    /// request. Smaller in magnitude than requested when the step is clamped.
    double delivered_kw;
};

/// Advances one slot at signed terminal power (charge > 0). Charging is
/// clamped at soc_max, discharging floored at soc_min.
SocStep soc_after(const EvState& state, double power_kw, const TimeGrid& grid);

/// SoC gained by one full-rate charging slot.
double charge_step_soc(const EvSpec& spec, const TimeGrid& grid);

bool is_parked(const EvSpec& spec, int slot, const TimeGrid& grid);
/// Number of parked slots, (departure - arrival) mod slots_per_day.
int parked_duration(const EvSpec& spec, const TimeGrid& grid);
/// Parked slots left including `slot`; 0 when not parked.
int slots_to_departure(const EvSpec& spec, int slot, const TimeGrid& grid);

} // namespace evmg

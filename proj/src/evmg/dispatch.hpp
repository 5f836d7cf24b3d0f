// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <span>
#include <string_view>

#include "evmg/core.hpp"
#include "evmg/ev.hpp"
#include "evmg/policy.hpp"
#include "evmg/tariff.hpp"

namespace evmg {

/// How EV discharge enters the books.
enum class Accounting {
    /// Discharge offsets grid draw and is also credited at the PV rate.
    OffsetAndSell,
    /// Discharge is credited at the PV rate but never offsets grid draw.
    SellOnly,
    /// Discharge offsets grid draw and earns nothing.
    OffsetOnly,
};

std::string_view to_string(Accounting mode);
Accounting parse_accounting(std::string_view text);

enum class PvMerit {
    /// PV always serves demand before the grid.
    Always,
    /// PV is skipped in slots where it is dearer than grid power.
    Economic,
};

std::string_view to_string(PvMerit merit);
PvMerit parse_pv_merit(std::string_view text);

struct DispatchOptions {
    Accounting accounting = Accounting::OffsetAndSell;
    PvMerit pv_merit = PvMerit::Always;
    std::optional<double> grid_cap_kw;

    friend bool operator==(const DispatchOptions&, const DispatchOptions&) = default;
};

/// Power flows for one slot, all in kW except `cost`.
struct SlotDispatch {
    int slot = 0;
    double grid_to_load = 0.0;
    double grid_to_ev = 0.0;
    double pv_to_load = 0.0;
    double pv_to_ev = 0.0;
    double ev_discharge_total = 0.0;
    double export_kw = 0.0;
    double ev_charge_total = 0.0;
    /// $ for this slot under the configured accounting mode.
    double cost = 0.0;
    double grid_draw = 0.0;
    double pv_used = 0.0;

    /// Discharge that displaced grid draw.
    double offset_kw() const { return ev_discharge_total - export_kw; }

    friend bool operator==(const SlotDispatch&, const SlotDispatch&) = default;
};

/// Aggregate delivered EV power in one slot.
struct EvFlows {
    double charge_kw = 0.0;
    double discharge_kw = 0.0;
};

/// PV serves base load, then EV charging; discharge offsets what remains and
/// the grid covers the residual. Surplus discharge is exported.
SlotDispatch dispatch_slot(const EvFlows& flows, double base_kw, double pv_kw,
                           const TariffSchedule& tariffs, int slot,
                           const DispatchOptions& options, const TimeGrid& grid);

/// As above, with flows derived from per-EV decisions through soc_after so
/// clamped steps count at their delivered power.
SlotDispatch dispatch_slot(std::span<const SwitchDecision> decisions,
                           std::span<const EvState> states, double base_kw, double pv_kw,
                           const TariffSchedule& tariffs, int slot,
                           const DispatchOptions& options, const TimeGrid& grid);

/// Signed terminal power for an action: full mode rate, before clamping.
double requested_power_kw(const EvSpec& spec, Action action);

/// Grid and PV purchases minus discharge credit, times the slot length.
double objective_cost(const SlotDispatch& d, const TariffSchedule& tariffs, int slot,
                      const TimeGrid& grid);
double objective_grid(const SlotDispatch& d);
double objective_pv(const SlotDispatch& d);

/// Checks the SlotDispatch invariants; returns an empty string when they
/// hold, otherwise a description of the first failure.
std::string check_balance(const SlotDispatch& d, double base_kw, double pv_kw,
                          double tolerance = 1e-9);

} // namespace evmg

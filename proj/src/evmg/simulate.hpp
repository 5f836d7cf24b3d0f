// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <span>
#include <vector>

#include "evmg/dispatch.hpp"
#include "evmg/policy.hpp"
#include "evmg/scenario.hpp"

namespace evmg {

/// One EV over its parked interval, indexed by parked step (0 = arrival slot).
struct EvTrajectory {
    std::vector<Action> actions;
    std::vector<bool> forced;
    /// Delivered terminal power, charge > 0.
    std::vector<double> power_kw;
    /// SoC at the end of each parked step.
    std::vector<double> soc;
};

struct Totals {
    double cost_usd = 0.0;
    double grid_kwh = 0.0;
    double pv_kwh = 0.0;
    double charge_kwh = 0.0;
    double discharge_kwh = 0.0;
    double export_kwh = 0.0;
    double offset_kwh = 0.0;
    double peak_grid_kw = 0.0;

    friend bool operator==(const Totals&, const Totals&) = default;
};

struct SimulationResult {
    Method method = Method::Proposed;
    std::vector<SlotDispatch> slots;
    /// [slot][ev]. End-of-slot SoC; outside the parked interval the value
    /// held at departure.
    std::vector<std::vector<double>> soc;
    /// [slot][ev]
    std::vector<std::vector<Action>> actions;
    /// [slot][ev], signed delivered power.
    std::vector<std::vector<double>> ev_power_kw;
    std::vector<double> departure_soc;
    Totals totals;

    friend bool operator==(const SimulationResult&, const SimulationResult&) = default;
};

/// Runs `method` on the scenario's profiles and tariffs with `fleet`. Each EV
/// is stepped along the circular day starting from its arrival slot, so an
/// interval that wraps midnight sees its arrival before its departure; the
/// per-slot totals then go through dispatch_slot in slot order.
SimulationResult simulate(const ScenarioConfig& scenario, std::span<const EvSpec> fleet,
                          Method method);
SimulationResult simulate(const ScenarioConfig& scenario, Method method);

/// Policy parameters for `method` under `scenario`.
PolicyParams policy_for(const ScenarioConfig& scenario, Method method);

/// PV profile seen by `method` (zero for the no-PV baseline when configured).
Profile pv_for(const ScenarioConfig& scenario, Method method);

EvTrajectory run_policy(const PolicyParams& params, const EvSpec& ev, const Profile& base_load,
                        const Profile& pv, const TimeGrid& grid);

/// Applies a fixed action list (one per parked step) through soc_after.
EvTrajectory replay(const EvSpec& ev, std::span<const Action> actions, const TimeGrid& grid);

/// Builds the per-slot dispatch and totals from per-EV trajectories.
SimulationResult assemble(const ScenarioConfig& scenario, const Profile& pv,
                          std::span<const EvSpec> fleet, std::span<const EvTrajectory> paths,
                          Method method);

/// Re-derives every SimulationResult invariant; throws InvariantViolation.
void audit(const SimulationResult& result, const ScenarioConfig& scenario,
           std::span<const EvSpec> fleet);

} // namespace evmg

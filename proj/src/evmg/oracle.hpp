// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "evmg/policy.hpp"
#include "evmg/scenario.hpp"

namespace evmg {

/// Largest number of candidate schedules (3^parked EV-slots) the oracle accepts.
inline constexpr double kOracleSearchLimit = 1e7;

struct OracleResult {
    /// [ev][parked step]
    std::vector<std::vector<Action>> actions;
    /// Whole-day cost including slots without EV activity.
    double cost = 0.0;
    /// Number of complete feasible schedules that were costed.
    std::size_t feasible_schedules = 0;
};

/// Exhaustive search for the cheapest feasible action table. A schedule is
/// feasible when every action respects the SoC guards (charge below soc_max,
/// discharge above soc_min), EVs act only while parked, and every EV departs
/// at its target. Candidates are visited in lexicographic order over
/// (absolute step from midnight, EV index) with charge < idle < discharge, and
/// a later candidate replaces the incumbent only if cheaper by more than
/// 1e-12 $, so ties resolve to the earliest sequence.
OracleResult brute_force_schedule(const ScenarioConfig& scenario, std::span<const EvSpec> fleet,
                                  const TimeGrid& grid);

} // namespace evmg

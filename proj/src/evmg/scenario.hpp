// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evmg/core.hpp"
#include "evmg/dispatch.hpp"
#include "evmg/ev.hpp"
#include "evmg/fleet.hpp"
#include "evmg/policy.hpp"
#include "evmg/profile.hpp"
#include "evmg/tariff.hpp"

namespace evmg {

/// A fully resolved scenario: profiles and tariffs rasterised, fleet
/// materialised, flag power a number.
struct ScenarioConfig {
    TimeGrid grid;
    Profile base_load{ProfileKind::BaseLoad, {}};
    Profile pv{ProfileKind::PvProduction, {}};
    TariffSchedule tariffs;

    /// Present when the fleet was sampled rather than read from a file; lets
    /// callers reseed.
    std::optional<FleetConfig> fleet_config;
    std::vector<EvSpec> fleet;

    PolicyParams policy;
    /// When set, flag power tracks default_flag_power of the profiles.
    bool flag_power_auto = true;
    DispatchOptions dispatch;
    /// Model the uncontrolled baseline as a microgrid without PV.
    bool uncontrolled_without_pv = false;
    std::string output_dir;
};

/// Recompute derived fields (auto flag power). Idempotent.
void resolve(ScenarioConfig& scenario);

/// Replace the fleet seed and resample. Throws ScenarioError when the fleet
/// came from a file.
void reseed(ScenarioConfig& scenario, std::uint64_t seed);

/// Checks dimensions and every fleet invariant, collecting all problems.
void validate(const ScenarioConfig& scenario);

/// Stable 64-bit FNV-1a digest of the resolved scenario, hex encoded.
std::string scenario_digest(const ScenarioConfig& scenario);

} // namespace evmg

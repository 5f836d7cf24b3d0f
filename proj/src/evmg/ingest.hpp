// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <istream>
#include <span>
#include <string_view>
#include <vector>

#include "evmg/core.hpp"
#include "evmg/ev.hpp"
#include "evmg/profile.hpp"
#include "evmg/scenario.hpp"

namespace evmg {

/// Two-column `slot,<value>` series with a header: exactly one row per slot,
/// slots in order from 0, values >= 0. ParseError names the offending row.
std::vector<double> parse_slot_series(std::istream& in, const TimeGrid& grid,
                                      std::string_view source);
std::vector<double> load_slot_series(const std::filesystem::path& path, const TimeGrid& grid);

Profile parse_profile(std::istream& in, ProfileKind kind, const TimeGrid& grid,
                      std::string_view source);
Profile load_profile(const std::filesystem::path& path, ProfileKind kind, const TimeGrid& grid);
/// Writes `slot,kw` rows with round-trip exact numbers.
void write_profile(std::ostream& out, const Profile& profile);
void write_profile(const std::filesystem::path& path, const Profile& profile);

Profile synth_profile(ProfileKind kind, const std::vector<Segment>& segments,
                      const TimeGrid& grid);

/// kW = W/m^2 * area * efficiency / 1000, slot by slot.
Profile irradiance_to_power(std::span<const double> irradiance_w_m2, double panel_area_m2,
                            double efficiency);

inline constexpr std::string_view kFleetCsvHeader =
    "id,capacity_kwh,mode,arrival_slot,departure_slot,initial_soc,target_soc,soc_min,soc_max";

/// Fleet CSV. Efficiencies are not part of the schema and come from the
/// arguments.
std::vector<EvSpec> parse_fleet(std::istream& in, std::string_view source,
                                double charge_efficiency = 1.0,
                                double discharge_efficiency = 1.0);
std::vector<EvSpec> load_fleet(const std::filesystem::path& path,
                               double charge_efficiency = 1.0,
                               double discharge_efficiency = 1.0);
void write_fleet(std::ostream& out, std::span<const EvSpec> fleet);
void write_fleet(const std::filesystem::path& path, std::span<const EvSpec> fleet);

/// Parses the `fleet` section schema (sampling parameters only).
FleetConfig parse_fleet_config(std::string_view json_text);
FleetConfig load_fleet_config(const std::filesystem::path& path);

/// Parses a scenario document. Relative file references resolve against
/// `base_dir`. Throws ScenarioError listing every problem found.
ScenarioConfig parse_scenario(std::string_view json_text,
                              const std::filesystem::path& base_dir);
ScenarioConfig load_scenario(const std::filesystem::path& path);

} // namespace evmg

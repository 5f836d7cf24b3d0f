// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <filesystem>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "evmg/scenario.hpp"
#include "evmg/simulate.hpp"

namespace evmg {

struct DepartureSummary {
    double min_soc = 0.0;
    double mean_soc = 0.0;
    int below_target = 0;
};

struct RunReport {
    std::string digest;
    Method method = Method::Proposed;
    double flag_power_kw = 0.0;
    Accounting accounting = Accounting::OffsetAndSell;
    Totals totals;
    DepartureSummary departure;
    std::vector<std::string> files;
};

DepartureSummary summarize_departures(std::span<const EvSpec> fleet, const SimulationResult& r);
RunReport make_run_report(const ScenarioConfig& scenario, const SimulationResult& r);
nlohmann::json to_json(const RunReport& report);

inline constexpr std::string_view kTimeseriesHeader =
    "slot,base_kw,pv_kw,grid_to_load,grid_to_ev,pv_to_load,pv_to_ev,ev_charge,ev_discharge,"
    "export,cost_usd,grid_rate,pv_rate";

void write_timeseries(std::ostream& out, const ScenarioConfig& scenario, const SimulationResult& r);
void write_soc(std::ostream& out, std::span<const EvSpec> fleet, const SimulationResult& r);

/// Writes timeseries.csv, soc.csv and, last, summary.json into `out_dir`.
/// Files are written under temporary names and renamed into place, so a
/// failure never leaves a summary.json behind.
RunReport write_run(const ScenarioConfig& scenario, const SimulationResult& r,
                    const std::filesystem::path& out_dir);

/// Percentage reductions of the proposed method against one baseline:
/// (baseline - proposed) / baseline * 100. NaN when the baseline is zero.
struct Reduction {
    Method baseline;
    double cost_pct;
    double grid_pct;
    double peak_pct;
};

double reduction_pct(double baseline, double proposed);

struct CompareReport {
    std::string digest;
    double flag_power_kw = 0.0;
    Accounting accounting = Accounting::OffsetAndSell;
    /// Indexed like kAllMethods.
    std::array<Totals, 3> totals;
    std::array<DepartureSummary, 3> departure;
    std::array<Reduction, 2> reductions;

    const Totals& of(Method m) const { return totals[static_cast<std::size_t>(m)]; }
};

/// Runs all three methods on the scenario's fleet.
CompareReport run_compare(const ScenarioConfig& scenario);
nlohmann::json to_json(const CompareReport& report);
std::string format_table(const CompareReport& report);
/// Writes compare.json into `out_dir` and returns its path.
std::filesystem::path write_compare(const CompareReport& report, const std::filesystem::path& out_dir);

struct SweepRow {
    double value;
    CompareReport report;
};

/// One comparison per flag power value, in input order.
std::vector<SweepRow> run_sweep(const ScenarioConfig& scenario, std::span<const double> flag_values);
void write_sweep(std::ostream& out, std::span<const SweepRow> rows);
std::filesystem::path write_sweep(std::span<const SweepRow> rows, const std::filesystem::path& out_dir);

struct FleetStats {
    int n = 0;
    std::array<int, 24> arrivals_by_hour{};
    std::array<int, 24> departures_by_hour{};
    int n_m2 = 0;
    double soc_mean = 0.0;
    double soc_std = 0.0;
};

FleetStats fleet_stats(std::span<const EvSpec> fleet, const TimeGrid& grid);

} // namespace evmg

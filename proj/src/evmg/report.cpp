// SPDX-License-Identifier: Apache-2.0

#include "evmg/report.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "evmg/errors.hpp"

namespace evmg {

using json = nlohmann::json;

namespace {

json number(double v) {
    if (!std::isfinite(v)) return nullptr;
    return round_report(v);
}

json totals_json(const Totals& t) {
    return json{{"cost_usd", number(t.cost_usd)},
                {"grid_kwh", number(t.grid_kwh)},
                {"pv_kwh", number(t.pv_kwh)},
                {"charge_kwh", number(t.charge_kwh)},
                {"discharge_kwh", number(t.discharge_kwh)},
                {"export_kwh", number(t.export_kwh)},
                {"offset_kwh", number(t.offset_kwh)},
                {"peak_grid_kw", number(t.peak_grid_kw)}};
}

json departure_json(const DepartureSummary& d) {
    return json{{"min_soc", number(d.min_soc)},
                {"mean_soc", number(d.mean_soc)},
                {"count_below_target", d.below_target}};
}

/// Write via a temporary sibling and rename into place.
void write_file(const std::filesystem::path& path, const std::string& contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw Error("cannot write " + tmp.string());
        out << contents;
        out.flush();
        if (!out) throw Error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) throw Error("cannot rename " + tmp.string() + ": " + ec.message());
}

void ensure_dir(const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error("cannot create " + dir.string() + ": " + ec.message());
}

} // namespace

DepartureSummary summarize_departures(std::span<const EvSpec> fleet, const SimulationResult& r) {
    DepartureSummary s;
    if (fleet.empty()) return s;
    s.min_soc = std::numeric_limits<double>::infinity();
    double sum = 0.0;
    for (std::size_t i = 0; i < fleet.size(); ++i) {
        const double soc = r.departure_soc[i];
        s.min_soc = std::min(s.min_soc, soc);
        sum += soc;
        if (soc < fleet[i].target_soc - kSocTolerance) ++s.below_target;
    }
    s.mean_soc = sum / static_cast<double>(fleet.size());
    return s;
}

RunReport make_run_report(const ScenarioConfig& scenario, const SimulationResult& r) {
    RunReport rep;
    rep.digest = scenario_digest(scenario);
    rep.method = r.method;
    rep.flag_power_kw = scenario.policy.flag_power_kw;
    rep.accounting = scenario.dispatch.accounting;
    rep.totals = r.totals;
    rep.departure = summarize_departures(scenario.fleet, r);
    return rep;
}

json to_json(const RunReport& rep) {
    return json{{"scenario_digest", rep.digest},
                {"method", to_string(rep.method)},
                {"flag_power_kw", number(rep.flag_power_kw)},
                {"accounting", to_string(rep.accounting)},
                {"totals", totals_json(rep.totals)},
                {"departure_soc", departure_json(rep.departure)},
                {"files", rep.files}};
}

void write_timeseries(std::ostream& out, const ScenarioConfig& scenario, const SimulationResult& r) {
    const Profile pv = pv_for(scenario, r.method);
    out << kTimeseriesHeader << '\n';
    for (const auto& d : r.slots) {
        const int t = d.slot;
        const double cols[] = {scenario.base_load.at(t), pv.at(t), d.grid_to_load, d.grid_to_ev,
                               d.pv_to_load, d.pv_to_ev, d.ev_charge_total, d.ev_discharge_total,
                               d.export_kw, d.cost, scenario.tariffs.grid_rate[t],
                               scenario.tariffs.pv_rate[t]};
        out << t;
        for (double v : cols) out << ',' << format_report(v);
        out << '\n';
    }
}

void write_soc(std::ostream& out, std::span<const EvSpec> fleet, const SimulationResult& r) {
    out << "slot";
    for (const auto& ev : fleet) out << ',' << ev.id;
    out << '\n';
    for (std::size_t t = 0; t < r.soc.size(); ++t) {
        out << t;
        for (double v : r.soc[t]) out << ',' << format_report(v);
        out << '\n';
    }
}

RunReport write_run(const ScenarioConfig& scenario, const SimulationResult& r,
                    const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    RunReport rep = make_run_report(scenario, r);

    std::ostringstream ts, soc;
    write_timeseries(ts, scenario, r);
    write_soc(soc, scenario.fleet, r);
    write_file(out_dir / "timeseries.csv", ts.str());
    write_file(out_dir / "soc.csv", soc.str());
    rep.files = {(out_dir / "timeseries.csv").string(), (out_dir / "soc.csv").string(),
                 (out_dir / "summary.json").string()};
    write_file(out_dir / "summary.json", to_json(rep).dump(2) + "\n");
    return rep;
}

double reduction_pct(double baseline, double proposed) {
    if (baseline == 0.0) return std::numeric_limits<double>::quiet_NaN();
    return (baseline - proposed) / baseline * 100.0;
}

CompareReport run_compare(const ScenarioConfig& scenario) {
    CompareReport rep;
    rep.digest = scenario_digest(scenario);
    rep.flag_power_kw = scenario.policy.flag_power_kw;
    rep.accounting = scenario.dispatch.accounting;
    for (Method m : kAllMethods) {
        const SimulationResult r = simulate(scenario, m);
        audit(r, scenario, scenario.fleet);
        rep.totals[static_cast<std::size_t>(m)] = r.totals;
        rep.departure[static_cast<std::size_t>(m)] = summarize_departures(scenario.fleet, r);
    }
    const Totals& p = rep.of(Method::Proposed);
    std::size_t k = 0;
    for (Method base : {Method::SchedulingOnly, Method::Uncontrolled}) {
        const Totals& b = rep.of(base);
        rep.reductions[k++] = {base, reduction_pct(b.cost_usd, p.cost_usd),
                               reduction_pct(b.grid_kwh, p.grid_kwh),
                               reduction_pct(b.peak_grid_kw, p.peak_grid_kw)};
    }
    return rep;
}

json to_json(const CompareReport& rep) {
    json methods = json::object();
    for (Method m : kAllMethods) {
        const auto i = static_cast<std::size_t>(m);
        methods[std::string(to_string(m))] = json{{"totals", totals_json(rep.totals[i])},
                                                  {"departure_soc", departure_json(rep.departure[i])}};
    }
    json reductions = json::object();
    for (const auto& r : rep.reductions) {
        reductions[std::string("proposed_vs_") + std::string(to_string(r.baseline))] =
            json{{"cost_pct", number(r.cost_pct)},
                 {"grid_energy_pct", number(r.grid_pct)},
                 {"peak_grid_pct", number(r.peak_pct)}};
    }
    return json{{"scenario_digest", rep.digest},
                {"flag_power_kw", number(rep.flag_power_kw)},
                {"accounting", to_string(rep.accounting)},
                {"methods", methods},
                {"reductions", reductions}};
}

std::string format_table(const CompareReport& rep) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-16s %12s %12s %12s %14s %12s\n", "method", "cost_usd",
                  "grid_kwh", "pv_kwh", "discharge_kwh", "peak_kw");
    out << line;
    for (Method m : kAllMethods) {
        const Totals& t = rep.of(m);
        std::snprintf(line, sizeof line, "%-16s %12.3f %12.3f %12.3f %14.3f %12.3f\n",
                      std::string(to_string(m)).c_str(), t.cost_usd, t.grid_kwh, t.pv_kwh,
                      t.discharge_kwh, t.peak_grid_kw);
        out << line;
    }
    out << '\n';
    for (const auto& r : rep.reductions) {
        std::snprintf(line, sizeof line,
                      "proposed vs %-16s cost %7.2f%%  grid energy %7.2f%%  peak %7.2f%%\n",
                      std::string(to_string(r.baseline)).c_str(), r.cost_pct, r.grid_pct,
                      r.peak_pct);
        out << line;
    }
    return out.str();
}

std::filesystem::path write_compare(const CompareReport& report, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    const auto path = out_dir / "compare.json";
    write_file(path, to_json(report).dump(2) + "\n");
    return path;
}

std::vector<SweepRow> run_sweep(const ScenarioConfig& scenario, std::span<const double> flag_values) {
    std::vector<SweepRow> rows;
    rows.reserve(flag_values.size());
    for (double v : flag_values) {
        if (!std::isfinite(v)) throw InvalidInput("sweep values must be finite");
        ScenarioConfig s = scenario;
        s.flag_power_auto = false;
        s.policy.flag_power_kw = v;
        rows.push_back({v, run_compare(s)});
    }
    return rows;
}

void write_sweep(std::ostream& out, std::span<const SweepRow> rows) {
    out << "flag_power_kw";
    for (Method m : kAllMethods) {
        const std::string p(to_string(m));
        for (const char* f : {"cost_usd", "grid_kwh", "pv_kwh", "discharge_kwh", "peak_grid_kw"})
            out << ',' << p << '_' << f;
    }
    for (Method m : {Method::SchedulingOnly, Method::Uncontrolled}) {
        const std::string p = "reduction_vs_" + std::string(to_string(m));
        out << ',' << p << "_cost_pct," << p << "_grid_pct," << p << "_peak_pct";
    }
    out << '\n';
    for (const auto& row : rows) {
        out << format_report(row.value);
        for (Method m : kAllMethods) {
            const Totals& t = row.report.of(m);
            for (double v : {t.cost_usd, t.grid_kwh, t.pv_kwh, t.discharge_kwh, t.peak_grid_kw})
                out << ',' << format_report(v);
        }
        for (const auto& r : row.report.reductions)
            for (double v : {r.cost_pct, r.grid_pct, r.peak_pct}) out << ',' << format_report(v);
        out << '\n';
    }
}

std::filesystem::path write_sweep(std::span<const SweepRow> rows, const std::filesystem::path& out_dir) {
    ensure_dir(out_dir);
    std::ostringstream ss;
    write_sweep(ss, rows);
    const auto path = out_dir / "sweep.csv";
    write_file(path, ss.str());
    return path;
}

FleetStats fleet_stats(std::span<const EvSpec> fleet, const TimeGrid& grid) {
    FleetStats s;
    s.n = static_cast<int>(fleet.size());
    const int step = grid.minutes_per_slot();
    double sum = 0.0, sq = 0.0;
    for (const auto& ev : fleet) {
        ++s.arrivals_by_hour[ev.arrival_slot * step / 60];
        ++s.departures_by_hour[ev.departure_slot * step / 60];
        if (ev.mode == ChargeMode::M2) ++s.n_m2;
        sum += ev.initial_soc;
    }
    if (s.n == 0) return s;
    s.soc_mean = sum / s.n;
    for (const auto& ev : fleet) sq += (ev.initial_soc - s.soc_mean) * (ev.initial_soc - s.soc_mean);
    s.soc_std = s.n > 1 ? std::sqrt(sq / (s.n - 1)) : 0.0;
    return s;
}

} // namespace evmg

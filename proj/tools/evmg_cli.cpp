// SPDX-License-Identifier: Apache-2.0
//
// evmg command-line front end. Everything goes through the C interface in
// evmg.h; this file only parses arguments and prints.

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "evmg.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kScenario = 2, kInternal = 3 };

int exit_for(evmg_status s) {
    switch (s) {
    case EVMG_OK: return kOk;
    case EVMG_ERR_INVARIANT:
    case EVMG_ERR_INTERNAL: return kInternal;
    default: return kScenario;
    }
}

struct Failure {
    int code;
};

void check(evmg_status s) {
    if (s == EVMG_OK) return;
    std::fprintf(stderr, "evmg: %s\n", evmg_last_error());
    throw Failure{exit_for(s)};
}

[[noreturn]] void usage(const std::string& message) {
    std::fprintf(stderr, "evmg: %s\n", message.c_str());
    throw Failure{kUsage};
}

using ScenarioPtr = std::unique_ptr<evmg_scenario, decltype(&evmg_scenario_free)>;
using ResultPtr = std::unique_ptr<evmg_result, decltype(&evmg_result_free)>;

struct CommonOptions {
    std::string scenario;
    std::string out;
    std::optional<std::uint64_t> seed;
    std::string flag_power;
    std::string accounting;
};

void add_common(CLI::App* cmd, CommonOptions& o) {
    cmd->add_option("--scenario", o.scenario, "Scenario JSON file")->required();
    cmd->add_option("--out", o.out, "Output directory (default: the scenario's output_dir)");
    cmd->add_option("--seed", o.seed, "Override the fleet seed");
    cmd->add_option("--flag-power", o.flag_power, "Flag power in kW, or 'auto'");
    cmd->add_option("--accounting", o.accounting,
                    "offset_and_sell | sell_only | offset_only");
}

double parse_number(const std::string& text, const char* what) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used == text.size() && std::isfinite(v)) return v;
    } catch (const std::exception&) {
    }
    usage(std::string("invalid ") + what + " '" + text + "'");
}

ScenarioPtr open_scenario(const CommonOptions& o) {
    evmg_scenario* raw = nullptr;
    check(evmg_scenario_load(o.scenario.c_str(), &raw));
    ScenarioPtr s(raw, &evmg_scenario_free);
    if (o.seed) check(evmg_scenario_set_seed(s.get(), *o.seed));
    if (o.flag_power == "auto") {
        check(evmg_scenario_set_flag_power_auto(s.get()));
    } else if (!o.flag_power.empty()) {
        check(evmg_scenario_set_flag_power(s.get(), parse_number(o.flag_power, "flag power")));
    }
    if (!o.accounting.empty()) {
        evmg_accounting mode{};
        if (evmg_accounting_parse(o.accounting.c_str(), &mode) != EVMG_OK) usage(evmg_last_error());
        check(evmg_scenario_set_accounting(s.get(), mode));
    }
    return s;
}

std::string output_dir(const CommonOptions& o, const evmg_scenario* s) {
    if (!o.out.empty()) return o.out;
    std::string dir = evmg_scenario_output_dir(s);
    return dir.empty() ? "out" : dir;
}

int cmd_run(const CommonOptions& o, const std::string& method_name) {
    ScenarioPtr s = open_scenario(o);
    evmg_method method{};
    if (method_name.empty()) {
        check(evmg_scenario_method(s.get(), &method));
    } else if (evmg_method_parse(method_name.c_str(), &method) != EVMG_OK) {
        usage(evmg_last_error());
    }
    evmg_result* raw = nullptr;
    check(evmg_simulate(s.get(), method, &raw));
    ResultPtr r(raw, &evmg_result_free);
    const std::string dir = output_dir(o, s.get());
    check(evmg_result_write(r.get(), dir.c_str()));

    evmg_totals t{};
    check(evmg_result_totals(r.get(), &t));
    std::printf("method        %s\n", evmg_method_name(method));
    std::printf("cost_usd      %.9g\n", t.cost_usd);
    std::printf("grid_kwh      %.9g\n", t.grid_kwh);
    std::printf("pv_kwh        %.9g\n", t.pv_kwh);
    std::printf("discharge_kwh %.9g\n", t.discharge_kwh);
    std::printf("peak_grid_kw  %.9g\n", t.peak_grid_kw);
    std::printf("output        %s\n", dir.c_str());
    return kOk;
}

int cmd_compare(const CommonOptions& o) {
    ScenarioPtr s = open_scenario(o);
    const std::string dir = output_dir(o, s.get());
    char* table = nullptr;
    check(evmg_compare(s.get(), dir.c_str(), &table));
    std::fputs(table, stdout);
    evmg_string_free(table);
    return kOk;
}

int cmd_sweep(const CommonOptions& o, const std::string& param,
              const std::vector<std::string>& values) {
    if (param != "flag_power") usage("unsupported sweep parameter '" + param + "'");
    std::vector<double> numbers;
    numbers.reserve(values.size());
    for (const auto& v : values) numbers.push_back(parse_number(v, "sweep value"));
    ScenarioPtr s = open_scenario(o);
    const std::string dir = output_dir(o, s.get());
    check(evmg_sweep_flag_power(s.get(), numbers.data(), numbers.size(), dir.c_str()));
    std::printf("%zu rows written to %s/sweep.csv\n", numbers.size(), dir.c_str());
    return kOk;
}

int parse_clock(const std::string& text) {
    int h = 0;
    int m = 0;
    char tail = 0;
    if (std::sscanf(text.c_str(), "%d:%d%c", &h, &m, &tail) != 2 || h < 0 || h > 24 || m < 0 ||
        m > 59 || (h == 24 && m != 0)) {
        usage("invalid time '" + text + "', expected HH:MM");
    }
    return h * 60 + m;
}

std::string clock_str(int minutes) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%02d:%02d", minutes / 60, minutes % 60);
    return buf;
}

struct GenFleetOptions {
    std::string config;
    std::string out = "fleet.csv";
    std::optional<int> n;
    std::optional<std::uint64_t> seed;
    std::vector<std::string> arrival_window;
    std::vector<std::string> departure_window;
    std::optional<double> mode_split;
    std::optional<double> soc_mean;
    std::optional<double> soc_std;
};

void print_histogram(const char* title, const int (&counts)[24]) {
    std::printf("%s\n", title);
    for (int h = 0; h < 24; ++h) {
        if (counts[h] != 0) std::printf("  %02d:00  %d\n", h, counts[h]);
    }
}

int cmd_gen_fleet(const GenFleetOptions& o) {
    evmg_fleet_config c{};
    if (o.config.empty()) {
        evmg_fleet_config_default(&c);
    } else {
        check(evmg_fleet_config_load(o.config.c_str(), &c));
    }
    if (o.n) c.n_evs = *o.n;
    if (o.seed) c.seed = *o.seed;
    if (o.mode_split) c.mode_split = *o.mode_split;
    if (o.soc_mean) c.soc_mean = *o.soc_mean;
    if (o.soc_std) c.soc_std = *o.soc_std;
    if (!o.arrival_window.empty()) {
        c.arrival_begin_min = parse_clock(o.arrival_window[0]);
        c.arrival_end_min = parse_clock(o.arrival_window[1]);
    }
    if (!o.departure_window.empty()) {
        c.departure_begin_min = parse_clock(o.departure_window[0]);
        c.departure_end_min = parse_clock(o.departure_window[1]);
    }

    evmg_fleet_stats st{};
    check(evmg_fleet_generate(&c, o.out.c_str(), &st));
    std::printf("fleet            %s\n", o.out.c_str());
    std::printf("n_evs            %d (M2: %d)\n", st.n, st.n_m2);
    std::printf("seed             %" PRIu64 "\n", c.seed);
    std::printf("arrival window   [%s, %s)\n", clock_str(c.arrival_begin_min).c_str(),
                clock_str(c.arrival_end_min).c_str());
    std::printf("departure window [%s, %s)\n", clock_str(c.departure_begin_min).c_str(),
                clock_str(c.departure_end_min).c_str());
    std::printf("soc mean         %.6f\n", st.soc_mean);
    std::printf("soc std          %.6f\n", st.soc_std);
    print_histogram("arrivals by hour", st.arrivals_by_hour);
    print_histogram("departures by hour", st.departures_by_hour);
    return kOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"EV parking-station microgrid simulator"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(evmg_version()));

    CommonOptions run_opts;
    std::string method;
    auto* run = app.add_subcommand("run", "Simulate one method and write per-slot outputs");
    add_common(run, run_opts);
    run->add_option("--method", method, "proposed | scheduling_only | uncontrolled");

    CommonOptions compare_opts;
    auto* compare = app.add_subcommand("compare", "Run all three methods on the same fleet");
    add_common(compare, compare_opts);

    CommonOptions sweep_opts;
    std::string param = "flag_power";
    std::vector<std::string> values;
    auto* sweep = app.add_subcommand("sweep", "Repeat the comparison for each parameter value");
    add_common(sweep, sweep_opts);
    sweep->add_option("--param", param, "Parameter to sweep (flag_power)");
    sweep->add_option("--values", values, "Values, comma separated or repeated")
        ->required()
        ->delimiter(',');

    GenFleetOptions fleet_opts;
    auto* gen = app.add_subcommand("gen-fleet", "Sample a fleet and write it as CSV");
    gen->add_option("--config", fleet_opts.config, "Fleet config JSON (the scenario fleet section)");
    gen->add_option("--out", fleet_opts.out, "Output CSV path");
    gen->add_option("--n", fleet_opts.n, "Number of EVs");
    gen->add_option("--seed", fleet_opts.seed, "Random seed");
    gen->add_option("--arrival-window", fleet_opts.arrival_window, "BEGIN END as HH:MM")
        ->expected(2);
    gen->add_option("--departure-window", fleet_opts.departure_window, "BEGIN END as HH:MM")
        ->expected(2);
    gen->add_option("--mode-split", fleet_opts.mode_split, "Fraction of EVs using M2");
    gen->add_option("--soc-mean", fleet_opts.soc_mean, "Initial SoC mean (%)");
    gen->add_option("--soc-std", fleet_opts.soc_std, "Initial SoC standard deviation (%)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }

    try {
        if (*run) return cmd_run(run_opts, method);
        if (*compare) return cmd_compare(compare_opts);
        if (*sweep) return cmd_sweep(sweep_opts, param, values);
        if (*gen) return cmd_gen_fleet(fleet_opts);
    } catch (const Failure& f) {
        return f.code;
    }
    return kUsage;
}

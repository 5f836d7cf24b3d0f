// SPDX-License-Identifier: Apache-2.0

#include "evmg.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <memory>
#include <new>
#include <string>

#include "evmg/errors.hpp"
#include "evmg/ingest.hpp"
#include "evmg/report.hpp"
#include "evmg/scenario.hpp"
#include "evmg/simulate.hpp"

struct evmg_scenario {
    evmg::ScenarioConfig config;
};

struct evmg_result {
    std::shared_ptr<const evmg::ScenarioConfig> scenario;
    evmg::SimulationResult result;
};

namespace {

thread_local std::string last_error;

evmg_status fail(evmg_status status, const std::string& message) {
    last_error = message;
    return status;
}

/// Maps exceptions from the core onto status codes.
template <class Fn> evmg_status guarded(Fn&& fn) {
    try {
        last_error.clear();
        fn();
        return EVMG_OK;
    } catch (const evmg::ScenarioError& e) {
        return fail(EVMG_ERR_SCENARIO, e.what());
    } catch (const evmg::ParseError& e) {
        return fail(EVMG_ERR_SCENARIO, e.what());
    } catch (const evmg::DefinitionError& e) {
        return fail(EVMG_ERR_SCENARIO, e.what());
    } catch (const evmg::InvalidInput& e) {
        return fail(EVMG_ERR_INVALID_ARGUMENT, e.what());
    } catch (const evmg::DegenerateWindow& e) {
        return fail(EVMG_ERR_SCENARIO, e.what());
    } catch (const evmg::InfeasibleError& e) {
        return fail(EVMG_ERR_INFEASIBLE, e.what());
    } catch (const evmg::InvariantViolation& e) {
        return fail(EVMG_ERR_INVARIANT, e.what());
    } catch (const evmg::Error& e) {
        return fail(EVMG_ERR_IO, e.what());
    } catch (const std::bad_alloc&) {
        return fail(EVMG_ERR_INTERNAL, "out of memory");
    } catch (const std::exception& e) {
        return fail(EVMG_ERR_INTERNAL, e.what());
    } catch (...) {
        return fail(EVMG_ERR_INTERNAL, "unknown error");
    }
}

#define EVMG_REQUIRE(cond, what)                                                                  \
    do {                                                                                          \
        if (!(cond)) return fail(EVMG_ERR_INVALID_ARGUMENT, what);                                \
    } while (0)

evmg::Method to_method(evmg_method m) {
    switch (m) {
    case EVMG_METHOD_PROPOSED: return evmg::Method::Proposed;
    case EVMG_METHOD_SCHEDULING_ONLY: return evmg::Method::SchedulingOnly;
    case EVMG_METHOD_UNCONTROLLED: return evmg::Method::Uncontrolled;
    }
    throw evmg::InvalidInput("unknown method value " + std::to_string(static_cast<int>(m)));
}

evmg::FleetConfig to_fleet_config(const evmg_fleet_config& c) {
    evmg::FleetConfig f;
    f.n_evs = c.n_evs;
    f.seed = c.seed;
    f.arrival = {evmg::ClockTime{c.arrival_begin_min}, evmg::ClockTime{c.arrival_end_min}};
    f.departure = {evmg::ClockTime{c.departure_begin_min}, evmg::ClockTime{c.departure_end_min}};
    f.arrival_mean_h = c.arrival_mean_h;
    f.arrival_std_h = c.arrival_std_h;
    f.departure_mean_h = c.departure_mean_h;
    f.departure_std_h = c.departure_std_h;
    f.soc_mean = c.soc_mean;
    f.soc_std = c.soc_std;
    f.mode_split = c.mode_split;
    f.capacity_kwh = c.capacity_kwh;
    f.target_soc = c.target_soc;
    f.soc_min = c.soc_min;
    f.soc_max = c.soc_max;
    f.charge_efficiency = c.charge_efficiency;
    f.discharge_efficiency = c.discharge_efficiency;
    return f;
}

void from_fleet_config(const evmg::FleetConfig& f, evmg_fleet_config& c) {
    c.n_evs = f.n_evs;
    c.seed = f.seed;
    c.arrival_begin_min = f.arrival.begin.minutes;
    c.arrival_end_min = f.arrival.end.minutes;
    c.departure_begin_min = f.departure.begin.minutes;
    c.departure_end_min = f.departure.end.minutes;
    c.arrival_mean_h = f.arrival_mean_h;
    c.arrival_std_h = f.arrival_std_h;
    c.departure_mean_h = f.departure_mean_h;
    c.departure_std_h = f.departure_std_h;
    c.soc_mean = f.soc_mean;
    c.soc_std = f.soc_std;
    c.mode_split = f.mode_split;
    c.capacity_kwh = f.capacity_kwh;
    c.target_soc = f.target_soc;
    c.soc_min = f.soc_min;
    c.soc_max = f.soc_max;
    c.charge_efficiency = f.charge_efficiency;
    c.discharge_efficiency = f.discharge_efficiency;
}

char* duplicate(const std::string& s) {
    char* out = static_cast<char*>(std::malloc(s.size() + 1));
    if (!out) throw std::bad_alloc();
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

} // namespace

extern "C" {

const char* evmg_version(void) { return "0.1.0"; }

const char* evmg_last_error(void) { return last_error.c_str(); }

const char* evmg_method_name(evmg_method method) {
    switch (method) {
    case EVMG_METHOD_PROPOSED: return "proposed";
    case EVMG_METHOD_SCHEDULING_ONLY: return "scheduling_only";
    case EVMG_METHOD_UNCONTROLLED: return "uncontrolled";
    }
    return "unknown";
}

evmg_status evmg_method_parse(const char* name, evmg_method* out) {
    EVMG_REQUIRE(name && out, "null argument");
    return guarded([&] { *out = static_cast<evmg_method>(evmg::parse_method(name)); });
}

evmg_status evmg_accounting_parse(const char* name, evmg_accounting* out) {
    EVMG_REQUIRE(name && out, "null argument");
    return guarded([&] { *out = static_cast<evmg_accounting>(evmg::parse_accounting(name)); });
}

evmg_status evmg_scenario_load(const char* path, evmg_scenario** out) {
    EVMG_REQUIRE(path && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto s = std::make_unique<evmg_scenario>();
        s->config = evmg::load_scenario(path);
        *out = s.release();
    });
}

void evmg_scenario_free(evmg_scenario* scenario) { delete scenario; }

evmg_status evmg_scenario_set_seed(evmg_scenario* scenario, uint64_t seed) {
    EVMG_REQUIRE(scenario, "null scenario");
    return guarded([&] {
        evmg::ScenarioConfig next = scenario->config;
        evmg::reseed(next, seed);
        evmg::resolve(next);
        evmg::validate(next);
        scenario->config = std::move(next);
    });
}

evmg_status evmg_scenario_set_flag_power(evmg_scenario* scenario, double kw) {
    EVMG_REQUIRE(scenario, "null scenario");
    EVMG_REQUIRE(std::isfinite(kw), "flag power must be finite");
    scenario->config.flag_power_auto = false;
    scenario->config.policy.flag_power_kw = kw;
    return EVMG_OK;
}

evmg_status evmg_scenario_set_flag_power_auto(evmg_scenario* scenario) {
    EVMG_REQUIRE(scenario, "null scenario");
    return guarded([&] {
        scenario->config.flag_power_auto = true;
        evmg::resolve(scenario->config);
    });
}

evmg_status evmg_scenario_set_accounting(evmg_scenario* scenario, evmg_accounting mode) {
    EVMG_REQUIRE(scenario, "null scenario");
    EVMG_REQUIRE(mode >= EVMG_ACCOUNTING_OFFSET_AND_SELL && mode <= EVMG_ACCOUNTING_OFFSET_ONLY,
                 "unknown accounting mode");
    scenario->config.dispatch.accounting = static_cast<evmg::Accounting>(mode);
    return EVMG_OK;
}

evmg_status evmg_scenario_flag_power(const evmg_scenario* scenario, double* kw) {
    EVMG_REQUIRE(scenario && kw, "null argument");
    *kw = scenario->config.policy.flag_power_kw;
    return EVMG_OK;
}

evmg_status evmg_scenario_method(const evmg_scenario* scenario, evmg_method* out) {
    EVMG_REQUIRE(scenario && out, "null argument");
    *out = static_cast<evmg_method>(scenario->config.policy.method);
    return EVMG_OK;
}

evmg_status evmg_scenario_fleet_size(const evmg_scenario* scenario, size_t* n) {
    EVMG_REQUIRE(scenario && n, "null argument");
    *n = scenario->config.fleet.size();
    return EVMG_OK;
}

const char* evmg_scenario_output_dir(const evmg_scenario* scenario) {
    return scenario ? scenario->config.output_dir.c_str() : "";
}

evmg_status evmg_scenario_digest(const evmg_scenario* scenario, char* buf, size_t len) {
    EVMG_REQUIRE(scenario && buf, "null argument");
    const std::string d = evmg::scenario_digest(scenario->config);
    EVMG_REQUIRE(len > d.size(), "digest buffer too small");
    std::memcpy(buf, d.c_str(), d.size() + 1);
    return EVMG_OK;
}

evmg_status evmg_simulate(const evmg_scenario* scenario, evmg_method method, evmg_result** out) {
    EVMG_REQUIRE(scenario && out, "null argument");
    *out = nullptr;
    return guarded([&] {
        auto r = std::make_unique<evmg_result>();
        r->scenario = std::make_shared<const evmg::ScenarioConfig>(scenario->config);
        r->result = evmg::simulate(*r->scenario, to_method(method));
        evmg::audit(r->result, *r->scenario, r->scenario->fleet);
        *out = r.release();
    });
}

void evmg_result_free(evmg_result* result) { delete result; }

evmg_status evmg_result_totals(const evmg_result* result, evmg_totals* out) {
    EVMG_REQUIRE(result && out, "null argument");
    const auto& t = result->result.totals;
    *out = {t.cost_usd,      t.grid_kwh,   t.pv_kwh,     t.charge_kwh,
            t.discharge_kwh, t.export_kwh, t.offset_kwh, t.peak_grid_kw};
    return EVMG_OK;
}

evmg_status evmg_result_slot_count(const evmg_result* result, int* n) {
    EVMG_REQUIRE(result && n, "null argument");
    *n = static_cast<int>(result->result.slots.size());
    return EVMG_OK;
}

evmg_status evmg_result_slot(const evmg_result* result, int slot, evmg_slot_dispatch* out) {
    EVMG_REQUIRE(result && out, "null argument");
    EVMG_REQUIRE(slot >= 0 && slot < static_cast<int>(result->result.slots.size()),
                 "slot out of range");
    const auto& d = result->result.slots[static_cast<std::size_t>(slot)];
    *out = {d.slot,      d.grid_to_load,    d.grid_to_ev, d.pv_to_load, d.pv_to_ev,
            d.ev_discharge_total, d.export_kw, d.ev_charge_total, d.cost, d.grid_draw,
            d.pv_used};
    return EVMG_OK;
}

evmg_status evmg_result_departure_soc(const evmg_result* result, size_t ev, double* soc) {
    EVMG_REQUIRE(result && soc, "null argument");
    EVMG_REQUIRE(ev < result->result.departure_soc.size(), "EV index out of range");
    *soc = result->result.departure_soc[ev];
    return EVMG_OK;
}

evmg_status evmg_result_write(const evmg_result* result, const char* out_dir) {
    EVMG_REQUIRE(result && out_dir, "null argument");
    return guarded([&] { evmg::write_run(*result->scenario, result->result, out_dir); });
}

evmg_status evmg_compare(const evmg_scenario* scenario, const char* out_dir, char** table) {
    EVMG_REQUIRE(scenario && out_dir, "null argument");
    if (table) *table = nullptr;
    return guarded([&] {
        const evmg::CompareReport rep = evmg::run_compare(scenario->config);
        evmg::write_compare(rep, out_dir);
        if (table) *table = duplicate(evmg::format_table(rep));
    });
}

evmg_status evmg_sweep_flag_power(const evmg_scenario* scenario, const double* values,
                                  size_t n_values, const char* out_dir) {
    EVMG_REQUIRE(scenario && out_dir && (values || n_values == 0), "null argument");
    return guarded([&] {
        const auto rows = evmg::run_sweep(scenario->config, std::span<const double>(values, n_values));
        evmg::write_sweep(rows, out_dir);
    });
}

void evmg_string_free(char* s) { std::free(s); }

void evmg_fleet_config_default(evmg_fleet_config* config) {
    if (config) from_fleet_config(evmg::FleetConfig{}, *config);
}

evmg_status evmg_fleet_config_load(const char* path, evmg_fleet_config* config) {
    EVMG_REQUIRE(path && config, "null argument");
    return guarded([&] { from_fleet_config(evmg::load_fleet_config(path), *config); });
}

evmg_status evmg_fleet_generate(const evmg_fleet_config* config, const char* csv_path,
                                evmg_fleet_stats* stats) {
    EVMG_REQUIRE(config && csv_path, "null argument");
    return guarded([&] {
        const evmg::TimeGrid grid;
        const auto fleet = evmg::sample_fleet(to_fleet_config(*config), grid);
        evmg::write_fleet(std::filesystem::path(csv_path), fleet);
        if (stats) {
            const auto s = evmg::fleet_stats(fleet, grid);
            stats->n = s.n;
            stats->n_m2 = s.n_m2;
            for (int h = 0; h < 24; ++h) {
                stats->arrivals_by_hour[h] = s.arrivals_by_hour[h];
                stats->departures_by_hour[h] = s.departures_by_hour[h];
            }
            stats->soc_mean = s.soc_mean;
            stats->soc_std = s.soc_std;
        }
    });
}

} // extern "C"

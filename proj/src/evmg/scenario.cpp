// SPDX-License-Identifier: Apache-2.0

#include "evmg/scenario.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>

#include "evmg/errors.hpp"

namespace evmg {

void resolve(ScenarioConfig& scenario) {
    if (scenario.flag_power_auto)
        scenario.policy.flag_power_kw = default_flag_power(scenario.base_load, scenario.pv);
}

void reseed(ScenarioConfig& scenario, std::uint64_t seed) {
    if (!scenario.fleet_config)
        throw ScenarioError("fleet: a fleet read from file cannot be reseeded");
    scenario.fleet_config->seed = seed;
    scenario.fleet = sample_fleet(*scenario.fleet_config, scenario.grid);
}

void validate(const ScenarioConfig& scenario) {
    std::vector<std::string> problems;
    auto check = [&](const char* what, auto&& fn) {
        try {
            fn();
        } catch (const Error& e) {
            problems.push_back(std::string(what) + ": " + e.what());
        }
    };
    check("time_grid", [&] { scenario.grid.validate(); });
    check("base_load", [&] { validate(scenario.base_load, scenario.grid); });
    check("pv", [&] { validate(scenario.pv, scenario.grid); });
    check("tariff", [&] { validate(scenario.tariffs, scenario.grid); });
    if (scenario.fleet.empty()) problems.push_back("fleet: no EVs");
    for (const auto& v : validate_fleet(scenario.fleet, scenario.grid))
        problems.push_back("fleet: " + v.ev_id + "." + v.field + ": " + v.message);
    if (scenario.policy.urgency_margin < 0) problems.push_back("policy.urgency_margin: must be >= 0");
    if (!std::isfinite(scenario.policy.flag_power_kw))
        problems.push_back("policy.flag_power: must be finite");
    if (!problems.empty()) throw ScenarioError(std::move(problems));
}

namespace {

class Fnv1a {
public:
    void bytes(const void* data, std::size_t n) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (std::size_t i = 0; i < n; ++i) {
            hash_ ^= p[i];
            hash_ *= 0x100000001b3ULL;
        }
    }
    void text(std::string_view s) {
        bytes(s.data(), s.size());
        bytes("\x1f", 1);
    }
    void number(double v) { text(format_exact(v)); }
    void integer(long long v) { text(std::to_string(v)); }
    std::uint64_t value() const { return hash_; }

private:
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

} // namespace

std::string scenario_digest(const ScenarioConfig& s) {
    Fnv1a h;
    h.integer(s.grid.slots_per_day);
    h.number(s.grid.slot_hours);
    for (const auto* series : {&s.base_load.values, &s.pv.values, &s.tariffs.grid_rate,
                               &s.tariffs.pv_rate}) {
        h.integer(static_cast<long long>(series->size()));
        for (double v : *series) h.number(v);
    }
    h.integer(static_cast<long long>(s.fleet.size()));
    for (const auto& ev : s.fleet) {
        h.text(ev.id);
        h.number(ev.capacity_kwh);
        h.text(to_string(ev.mode));
        h.integer(ev.arrival_slot);
        h.integer(ev.departure_slot);
        for (double v : {ev.initial_soc, ev.target_soc, ev.soc_min, ev.soc_max,
                         ev.charge_efficiency, ev.discharge_efficiency})
            h.number(v);
    }
    h.number(s.policy.flag_power_kw);
    h.integer(s.policy.urgency_margin);
    h.text(to_string(s.dispatch.accounting));
    h.text(to_string(s.dispatch.pv_merit));
    h.text(s.dispatch.grid_cap_kw ? format_exact(*s.dispatch.grid_cap_kw) : "none");
    h.integer(s.uncontrolled_without_pv);

    char buf[20];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h.value()));
    return buf;
}

} // namespace evmg

// SPDX-License-Identifier: Apache-2.0

#include "evmg/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evmg/errors.hpp"

namespace evmg {

PolicyParams policy_for(const ScenarioConfig& scenario, Method method) {
    PolicyParams p = scenario.policy;
    p.method = method;
    return p;
}

Profile pv_for(const ScenarioConfig& scenario, Method method) {
    if (method == Method::Uncontrolled && scenario.uncontrolled_without_pv)
        return Profile{ProfileKind::PvProduction,
                       std::vector<double>(scenario.pv.values.size(), 0.0)};
    return scenario.pv;
}

EvTrajectory run_policy(const PolicyParams& params, const EvSpec& ev, const Profile& base_load,
                        const Profile& pv, const TimeGrid& grid) {
    const int duration = parked_duration(ev, grid);
    EvTrajectory path;
    path.actions.reserve(duration);
    path.forced.reserve(duration);
    path.power_kw.reserve(duration);
    path.soc.reserve(duration);

    double soc = ev.initial_soc;
    for (int k = 0; k < duration; ++k) {
        const int slot = grid.wrap(ev.arrival_slot + k);
        const EvState state{ev, soc};
        const SwitchDecision d =
            decide_switch(params, state, slot, base_load.at(slot), pv.at(slot), grid);
        const SocStep step = soc_after(state, requested_power_kw(ev, d.action), grid);
        soc = step.soc;
        path.actions.push_back(d.action);
        path.forced.push_back(d.forced_by_deadline);
        path.power_kw.push_back(step.delivered_kw);
        path.soc.push_back(soc);
    }
    return path;
}

EvTrajectory replay(const EvSpec& ev, std::span<const Action> actions, const TimeGrid& grid) {
    const int duration = parked_duration(ev, grid);
    if (static_cast<int>(actions.size()) != duration)
        throw InvalidInput("action list for " + ev.id + " must cover its " +
                           std::to_string(duration) + " parked slots");
    EvTrajectory path;
    double soc = ev.initial_soc;
    for (Action a : actions) {
        const SocStep step = soc_after(EvState{ev, soc}, requested_power_kw(ev, a), grid);
        soc = step.soc;
        path.actions.push_back(a);
        path.forced.push_back(false);
        path.power_kw.push_back(step.delivered_kw);
        path.soc.push_back(soc);
    }
    return path;
}

SimulationResult assemble(const ScenarioConfig& scenario, const Profile& pv,
                          std::span<const EvSpec> fleet, std::span<const EvTrajectory> paths,
                          Method method) {
    const TimeGrid& grid = scenario.grid;
    const int n = grid.slots_per_day;
    const std::size_t n_ev = fleet.size();

    SimulationResult r;
    r.method = method;
    r.actions.assign(n, std::vector<Action>(n_ev, Action::Idle));
    r.ev_power_kw.assign(n, std::vector<double>(n_ev, 0.0));
    r.soc.assign(n, std::vector<double>(n_ev, 0.0));
    r.departure_soc.resize(n_ev);

    std::vector<EvFlows> flows(n);
    for (std::size_t i = 0; i < n_ev; ++i) {
        const EvSpec& ev = fleet[i];
        const EvTrajectory& path = paths[i];
        const double final_soc = path.soc.empty() ? ev.initial_soc : path.soc.back();
        r.departure_soc[i] = final_soc;
        for (int t = 0; t < n; ++t) r.soc[t][i] = final_soc;
        for (std::size_t k = 0; k < path.actions.size(); ++k) {
            const int t = grid.wrap(ev.arrival_slot + static_cast<int>(k));
            r.actions[t][i] = path.actions[k];
            r.ev_power_kw[t][i] = path.power_kw[k];
            r.soc[t][i] = path.soc[k];
            if (path.power_kw[k] > 0.0) flows[t].charge_kw += path.power_kw[k];
            else flows[t].discharge_kw -= path.power_kw[k];
        }
    }

    r.slots.reserve(n);
    for (int t = 0; t < n; ++t) {
        const SlotDispatch d = dispatch_slot(flows[t], scenario.base_load.at(t), pv.at(t),
                                             scenario.tariffs, t, scenario.dispatch, grid);
        Totals& tot = r.totals;
        tot.cost_usd += d.cost;
        tot.grid_kwh += d.grid_draw * grid.slot_hours;
        tot.pv_kwh += d.pv_used * grid.slot_hours;
        tot.charge_kwh += d.ev_charge_total * grid.slot_hours;
        tot.discharge_kwh += d.ev_discharge_total * grid.slot_hours;
        tot.export_kwh += d.export_kw * grid.slot_hours;
        tot.offset_kwh += d.offset_kw() * grid.slot_hours;
        tot.peak_grid_kw = std::max(tot.peak_grid_kw, d.grid_draw);
        r.slots.push_back(d);
    }
    return r;
}

namespace {

void check_fleet(const ScenarioConfig& scenario, std::span<const EvSpec> fleet) {
    std::vector<std::string> problems;
    for (const auto& v : validate_fleet(fleet, scenario.grid))
        problems.push_back(v.ev_id + "." + v.field + ": " + v.message);
    if (!problems.empty()) throw ScenarioError(std::move(problems));
}

void check_grid_cap(const ScenarioConfig& scenario, const SimulationResult& r,
                    std::span<const EvTrajectory> paths, std::span<const EvSpec> fleet) {
    if (!scenario.dispatch.grid_cap_kw) return;
    const double cap = *scenario.dispatch.grid_cap_kw;
    const TimeGrid& grid = scenario.grid;
    for (const auto& d : r.slots) {
        if (d.grid_draw <= cap + 1e-9) continue;
        int forced = 0;
        for (std::size_t i = 0; i < fleet.size(); ++i) {
            const int k = grid.wrap(d.slot - fleet[i].arrival_slot);
            if (k < static_cast<int>(paths[i].forced.size()) && paths[i].forced[k] &&
                paths[i].actions[k] == Action::Charge)
                ++forced;
        }
        throw InfeasibleError("grid draw " + format_report(d.grid_draw) + " kW exceeds cap " +
                              format_report(cap) + " kW at slot " + std::to_string(d.slot) +
                              " (" + slot_start(d.slot, grid).str() + ", " +
                              std::to_string(forced) + " deadline-forced charges)");
    }
}

} // namespace

SimulationResult simulate(const ScenarioConfig& scenario, std::span<const EvSpec> fleet,
                          Method method) {
    scenario.grid.validate();
    validate(scenario.base_load, scenario.grid);
    validate(scenario.pv, scenario.grid);
    validate(scenario.tariffs, scenario.grid);
    check_fleet(scenario, fleet);

    const PolicyParams params = policy_for(scenario, method);
    const Profile pv = pv_for(scenario, method);
    std::vector<EvTrajectory> paths;
    paths.reserve(fleet.size());
    for (const auto& ev : fleet)
        paths.push_back(run_policy(params, ev, scenario.base_load, pv, scenario.grid));

    SimulationResult r = assemble(scenario, pv, fleet, paths, method);
    check_grid_cap(scenario, r, paths, fleet);
    return r;
}

SimulationResult simulate(const ScenarioConfig& scenario, Method method) {
    return simulate(scenario, scenario.fleet, method);
}

void audit(const SimulationResult& r, const ScenarioConfig& scenario,
           std::span<const EvSpec> fleet) {
    const TimeGrid& grid = scenario.grid;
    const Profile pv = pv_for(scenario, r.method);
    auto fail = [](const std::string& m) { throw InvariantViolation(m); };

    if (static_cast<int>(r.slots.size()) != grid.slots_per_day) fail("slot count mismatch");
    Totals sums;
    for (int t = 0; t < grid.slots_per_day; ++t) {
        const SlotDispatch& d = r.slots[t];
        if (auto msg = check_balance(d, scenario.base_load.at(t), pv.at(t)); !msg.empty())
            fail(msg);
        sums.cost_usd += d.cost;
        sums.grid_kwh += d.grid_draw * grid.slot_hours;
        sums.pv_kwh += d.pv_used * grid.slot_hours;
        sums.charge_kwh += d.ev_charge_total * grid.slot_hours;
        sums.discharge_kwh += d.ev_discharge_total * grid.slot_hours;
        sums.export_kwh += d.export_kw * grid.slot_hours;
        sums.offset_kwh += d.offset_kw() * grid.slot_hours;
        sums.peak_grid_kw = std::max(sums.peak_grid_kw, d.grid_draw);

        double charge = 0.0, discharge = 0.0;
        for (std::size_t i = 0; i < fleet.size(); ++i) {
            const double p = r.ev_power_kw[t][i];
            const Action a = r.actions[t][i];
            if ((p > 0.0 && a != Action::Charge) || (p < 0.0 && a != Action::Discharge))
                fail("power sign disagrees with action for " + fleet[i].id);
            if (a != Action::Idle && !is_parked(fleet[i], t, grid))
                fail(fleet[i].id + " acts while not parked at slot " + std::to_string(t));
            if (p > 0.0) charge += p;
            else discharge -= p;
        }
        if (std::abs(charge - d.ev_charge_total) > 1e-9 ||
            std::abs(discharge - d.ev_discharge_total) > 1e-9)
            fail("EV flows disagree with dispatch at slot " + std::to_string(t));
    }
    if (!(sums == r.totals)) fail("totals are not the sums of the per-slot values");

    for (std::size_t i = 0; i < fleet.size(); ++i) {
        const EvSpec& ev = fleet[i];
        double energy_pct = 0.0;
        double prev = ev.initial_soc;
        const int duration = parked_duration(ev, grid);
        for (int k = 0; k < grid.slots_per_day; ++k) {
            const int t = grid.wrap(ev.arrival_slot + k);
            const double soc = r.soc[t][i];
            if (!(soc >= 0.0 && soc <= ev.soc_max))
                fail(ev.id + " SoC " + format_report(soc) + " outside [0, soc_max]");
            if (k >= duration && soc != prev) fail(ev.id + " SoC changes while away");
            const double p = r.ev_power_kw[t][i];
            energy_pct += 100.0 / ev.capacity_kwh * grid.slot_hours *
                          (p > 0.0 ? p * ev.charge_efficiency : p / ev.discharge_efficiency);
            prev = soc;
        }
        const double delta = r.departure_soc[i] - ev.initial_soc;
        if (std::abs(delta - energy_pct) > 1e-9)
            fail(ev.id + " SoC change does not match delivered energy");
    }
}

} // namespace evmg

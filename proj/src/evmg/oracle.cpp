// SPDX-License-Identifier: Apache-2.0

#include "evmg/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "evmg/dispatch.hpp"
#include "evmg/errors.hpp"

namespace evmg {

namespace {

struct DecisionPoint {
    int step;      // absolute step, may exceed one day for wrapped intervals
    int slot;
    std::size_t ev;
    int k;         // parked step index
    int remaining; // parked slots left including this one
};

class Search {
public:
    Search(const ScenarioConfig& scenario, std::span<const EvSpec> fleet, const TimeGrid& grid)
        : scenario_(scenario), fleet_(fleet), grid_(grid) {
        for (std::size_t i = 0; i < fleet.size(); ++i) {
            const int duration = parked_duration(fleet[i], grid);
            for (int k = 0; k < duration; ++k) {
                const int step = fleet[i].arrival_slot + k;
                points_.push_back({step, grid.wrap(step), i, k, duration - k});
            }
        }
        std::sort(points_.begin(), points_.end(), [](const auto& a, const auto& b) {
            return a.step != b.step ? a.step < b.step : a.ev < b.ev;
        });

        const int n = grid.slots_per_day;
        touched_.assign(n, false);
        for (const auto& p : points_) touched_[p.slot] = true;
        idle_cost_.resize(n);
        for (int t = 0; t < n; ++t)
            idle_cost_[t] = dispatch_slot(EvFlows{}, scenario.base_load.at(t), scenario.pv.at(t),
                                          scenario.tariffs, t, scenario.dispatch, grid)
                                .cost;

        soc_.resize(fleet.size());
        for (std::size_t i = 0; i < fleet.size(); ++i) soc_[i] = fleet[i].initial_soc;
        chosen_.resize(points_.size());
        power_.resize(points_.size());
        flows_.resize(n);
    }

    OracleResult run() {
        descend(0);
        if (result_.feasible_schedules == 0)
            throw InfeasibleError("no feasible schedule reaches every target SoC");
        return result_;
    }

private:
    void descend(std::size_t depth) {
        if (depth == points_.size()) {
            leaf();
            return;
        }
        const DecisionPoint& p = points_[depth];
        const EvSpec& ev = fleet_[p.ev];
        const double soc = soc_[p.ev];
        for (Action a : {Action::Charge, Action::Idle, Action::Discharge}) {
            if (a == Action::Charge && !(soc < ev.soc_max)) continue;
            if (a == Action::Discharge && !(soc > ev.soc_min)) continue;
            const SocStep step = soc_after(EvState{ev, soc}, requested_power_kw(ev, a), grid_);
            if (required_charge_slots(EvState{ev, step.soc}, grid_) > p.remaining - 1) continue;
            soc_[p.ev] = step.soc;
            chosen_[depth] = a;
            power_[depth] = step.delivered_kw;
            descend(depth + 1);
            soc_[p.ev] = soc;
        }
    }

    void leaf() {
        ++result_.feasible_schedules;
        std::fill(flows_.begin(), flows_.end(), EvFlows{});
        for (std::size_t j = 0; j < points_.size(); ++j) {
            const double p = power_[j];
            if (p > 0.0) flows_[points_[j].slot].charge_kw += p;
            else flows_[points_[j].slot].discharge_kw -= p;
        }
        double cost = 0.0;
        for (int t = 0; t < grid_.slots_per_day; ++t) {
            cost += touched_[t]
                        ? dispatch_slot(flows_[t], scenario_.base_load.at(t), scenario_.pv.at(t),
                                        scenario_.tariffs, t, scenario_.dispatch, grid_)
                              .cost
                        : idle_cost_[t];
        }
        if (result_.feasible_schedules == 1 || cost < result_.cost - 1e-12) {
            result_.cost = cost;
            result_.actions.assign(fleet_.size(), {});
            for (std::size_t i = 0; i < fleet_.size(); ++i)
                result_.actions[i].resize(parked_duration(fleet_[i], grid_));
            for (std::size_t j = 0; j < points_.size(); ++j)
                result_.actions[points_[j].ev][points_[j].k] = chosen_[j];
        }
    }

    const ScenarioConfig& scenario_;
    std::span<const EvSpec> fleet_;
    const TimeGrid& grid_;
    std::vector<DecisionPoint> points_;
    std::vector<bool> touched_;
    std::vector<double> idle_cost_;
    std::vector<double> soc_;
    std::vector<Action> chosen_;
    std::vector<double> power_;
    std::vector<EvFlows> flows_;
    OracleResult result_;
};

} // namespace

OracleResult brute_force_schedule(const ScenarioConfig& scenario, std::span<const EvSpec> fleet,
                                  const TimeGrid& grid) {
    for (const auto& v : validate_fleet(fleet, grid))
        throw ScenarioError(v.ev_id + "." + v.field + ": " + v.message);
    long parked = 0;
    for (const auto& ev : fleet) parked += parked_duration(ev, grid);
    if (std::pow(3.0, static_cast<double>(parked)) > kOracleSearchLimit)
        throw SearchSpaceTooLarge("3^" + std::to_string(parked) +
                                  " candidate schedules exceed the oracle limit of 1e7");
    return Search(scenario, fleet, grid).run();
}

} // namespace evmg

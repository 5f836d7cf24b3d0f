// SPDX-License-Identifier: Apache-2.0

#include "evmg/policy.hpp"

#include <cmath>
#include <string>

#include "evmg/errors.hpp"

namespace evmg {

std::string_view to_string(Method method) {
    switch (method) {
    case Method::Proposed: return "proposed";
    case Method::SchedulingOnly: return "scheduling_only";
    case Method::Uncontrolled: return "uncontrolled";
    }
    return "?";
}

Method parse_method(std::string_view text) {
    for (Method m : kAllMethods)
        if (text == to_string(m)) return m;
    throw InvalidInput("unknown method '" + std::string(text) +
                       "' (expected proposed, scheduling_only or uncontrolled)");
}

std::string_view to_string(Action action) {
    switch (action) {
    case Action::Charge: return "charge";
    case Action::Idle: return "idle";
    case Action::Discharge: return "discharge";
    }
    return "?";
}

double default_flag_power(const Profile& base_load, const Profile& pv) {
    if (base_load.values.size() != pv.values.size() || base_load.values.empty())
        throw InvalidInput("base load and PV profiles must have the same non-zero length");
    double sum = 0.0;
    for (std::size_t t = 0; t < base_load.values.size(); ++t)
        sum += base_load.values[t] - pv.values[t];
    return sum / static_cast<double>(base_load.values.size());
}

int required_charge_slots(const EvState& state, const TimeGrid& grid) {
    const double deficit = state.spec.target_soc - state.soc;
    if (deficit <= kSocTolerance) return 0;
    // k slots suffice iff deficit - k * step <= tolerance
    return static_cast<int>(
        std::ceil((deficit - kSocTolerance) / charge_step_soc(state.spec, grid)));
}

SwitchDecision decide_switch(const PolicyParams& params, const EvState& state, int slot,
                             double base_kw, double pv_kw, const TimeGrid& grid) {
    const EvSpec& ev = state.spec;
    SwitchDecision d{ev.id, Action::Idle, false};
    const int remaining = slots_to_departure(ev, slot, grid);
    if (remaining == 0) return d;

    const int required = required_charge_slots(state, grid);
    if (params.method == Method::Uncontrolled) {
        if (required > 0) d.action = Action::Charge;
        return d;
    }

    if (required > 0 && remaining <= required + params.urgency_margin) {
        d.forced_by_deadline = true;
        if (state.soc < ev.soc_max) d.action = Action::Charge;
        return d;
    }

    const double net = base_kw - pv_kw;
    if (net < params.flag_power_kw) {
        if (state.soc < ev.soc_max) d.action = Action::Charge;
    } else if (params.method == Method::Proposed && state.soc > ev.soc_min) {
        // veto a discharge that would leave the target out of reach
        const SocStep after = soc_after(state, -ev.rate_kw(), grid);
        if (required_charge_slots(EvState{ev, after.soc}, grid) <= remaining - 1)
            d.action = Action::Discharge;
    }
    return d;
}

std::vector<SwitchDecision> decide_switches(const PolicyParams& params,
                                            std::span<const EvState> evs, int slot,
                                            const Profile& base_load, const Profile& pv,
                                            const TimeGrid& grid) {
    check_slot(slot, grid);
    const auto n = static_cast<std::size_t>(grid.slots_per_day);
    if (base_load.values.size() != n || pv.values.size() != n)
        throw InvalidInput("profiles do not cover the time grid");
    std::vector<SwitchDecision> out;
    out.reserve(evs.size());
    for (const auto& s : evs)
        out.push_back(decide_switch(params, s, slot, base_load.at(slot), pv.at(slot), grid));
    return out;
}

} // namespace evmg

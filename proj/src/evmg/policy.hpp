// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "evmg/core.hpp"
#include "evmg/ev.hpp"
#include "evmg/profile.hpp"

namespace evmg {

enum class Method {
    /// Net-load switching rule with V2G discharge.
    Proposed,
    /// Same charging rule, never discharges.
    SchedulingOnly,
    /// Charge at full rate from arrival until the target is met.
    Uncontrolled,
};

std::string_view to_string(Method method);
Method parse_method(std::string_view text);
inline constexpr Method kAllMethods[] = {Method::Proposed, Method::SchedulingOnly,
                                         Method::Uncontrolled};

struct PolicyParams {
    Method method = Method::Proposed;
    /// Net-load threshold separating charging from discharging periods (kW).
    double flag_power_kw = 0.0;
    /// Extra slots of slack before the deadline override kicks in.
    int urgency_margin = 0;
};

/// Declaration order is the oracle's tie-break order.
enum class Action : std::int8_t { Charge, Idle, Discharge };

std::string_view to_string(Action action);

struct SwitchDecision {
    std::string_view ev_id;
    Action action = Action::Idle;
    bool forced_by_deadline = false;
};

/// Mean of base - pv over the day.
double default_flag_power(const Profile& base_load, const Profile& pv);

/// Full-rate slots still needed to bring `state` up to its target SoC.
int required_charge_slots(const EvState& state, const TimeGrid& grid);

SwitchDecision decide_switch(const PolicyParams& params, const EvState& state, int slot,
                             double base_kw, double pv_kw, const TimeGrid& grid);

std::vector<SwitchDecision> decide_switches(const PolicyParams& params,
                                            std::span<const EvState> evs, int slot,
                                            const Profile& base_load, const Profile& pv,
                                            const TimeGrid& grid);

} // namespace evmg

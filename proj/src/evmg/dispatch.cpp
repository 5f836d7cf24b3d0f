// SPDX-License-Identifier: Apache-2.0

#include "evmg/dispatch.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "evmg/errors.hpp"

namespace evmg {

std::string_view to_string(Accounting mode) {
    switch (mode) {
    case Accounting::OffsetAndSell: return "offset_and_sell";
    case Accounting::SellOnly: return "sell_only";
    case Accounting::OffsetOnly: return "offset_only";
    }
    return "?";
}

Accounting parse_accounting(std::string_view text) {
    for (auto m : {Accounting::OffsetAndSell, Accounting::SellOnly, Accounting::OffsetOnly})
        if (text == to_string(m)) return m;
    throw InvalidInput("unknown accounting mode '" + std::string(text) +
                       "' (expected offset_and_sell, sell_only or offset_only)");
}

std::string_view to_string(PvMerit merit) {
    return merit == PvMerit::Always ? "always" : "economic";
}

PvMerit parse_pv_merit(std::string_view text) {
    if (text == "always") return PvMerit::Always;
    if (text == "economic") return PvMerit::Economic;
    throw InvalidInput("unknown pv_merit '" + std::string(text) +
                       "' (expected always or economic)");
}

SlotDispatch dispatch_slot(const EvFlows& flows, double base_kw, double pv_kw,
                           const TariffSchedule& tariffs, int slot,
                           const DispatchOptions& options, const TimeGrid& grid) {
    if (!(base_kw >= 0.0) || !(pv_kw >= 0.0))
        throw InvalidInput("negative profile value at slot " + std::to_string(slot));
    if (!(flows.charge_kw >= 0.0) || !(flows.discharge_kw >= 0.0))
        throw InvalidInput("EV flows must be >= 0 at slot " + std::to_string(slot));

    const double grid_rate = tariff_rate(tariffs, PriceSource::Grid, slot);
    const double pv_rate = tariff_rate(tariffs, PriceSource::Pv, slot);

    SlotDispatch d;
    d.slot = slot;
    d.ev_charge_total = flows.charge_kw;
    d.ev_discharge_total = flows.discharge_kw;

    const bool use_pv = options.pv_merit == PvMerit::Always || pv_rate <= grid_rate;
    const double pv_avail = use_pv ? pv_kw : 0.0;
    d.pv_to_load = std::min(pv_avail, base_kw);
    d.pv_to_ev = std::min(pv_avail - d.pv_to_load, flows.charge_kw);
    d.pv_used = d.pv_to_load + d.pv_to_ev;

    const double residual = (base_kw - d.pv_to_load) + (flows.charge_kw - d.pv_to_ev);
    const double offset = options.accounting == Accounting::SellOnly
                              ? 0.0
                              : std::min(flows.discharge_kw, residual);
    d.grid_draw = residual - offset;
    d.export_kw = flows.discharge_kw - offset;
    d.grid_to_load = std::min(d.grid_draw, base_kw - d.pv_to_load);
    d.grid_to_ev = d.grid_draw - d.grid_to_load;
    d.grid_draw = d.grid_to_load + d.grid_to_ev;

    if (options.accounting == Accounting::OffsetOnly)
        d.cost = (grid_rate * (d.grid_to_load + d.grid_to_ev) +
                  pv_rate * (d.pv_to_load + d.pv_to_ev)) *
                 grid.slot_hours;
    else
        d.cost = objective_cost(d, tariffs, slot, grid);
    return d;
}

double requested_power_kw(const EvSpec& spec, Action action) {
    switch (action) {
    case Action::Charge: return spec.rate_kw();
    case Action::Discharge: return -spec.rate_kw();
    case Action::Idle: return 0.0;
    }
    return 0.0;
}

SlotDispatch dispatch_slot(std::span<const SwitchDecision> decisions,
                           std::span<const EvState> states, double base_kw, double pv_kw,
                           const TariffSchedule& tariffs, int slot,
                           const DispatchOptions& options, const TimeGrid& grid) {
    if (decisions.size() != states.size())
        throw InvalidInput("need exactly one decision per EV");
    EvFlows flows;
    for (std::size_t i = 0; i < states.size(); ++i) {
        if (decisions[i].action != Action::Idle && !is_parked(states[i].spec, slot, grid))
            throw InvalidInput("decision for unparked EV " + states[i].spec.id);
        const double p = soc_after(states[i], requested_power_kw(states[i].spec, decisions[i].action), grid)
                             .delivered_kw;
        if (p > 0.0) flows.charge_kw += p;
        else flows.discharge_kw -= p;
    }
    return dispatch_slot(flows, base_kw, pv_kw, tariffs, slot, options, grid);
}

double objective_cost(const SlotDispatch& d, const TariffSchedule& tariffs, int slot,
                      const TimeGrid& grid) {
    return (tariff_rate(tariffs, PriceSource::Grid, slot) * (d.grid_to_load + d.grid_to_ev) +
            tariff_rate(tariffs, PriceSource::Pv, slot) *
                (d.pv_to_load + d.pv_to_ev - d.ev_discharge_total)) *
           grid.slot_hours;
}

double objective_grid(const SlotDispatch& d) { return d.grid_to_load + d.grid_to_ev; }

double objective_pv(const SlotDispatch& d) { return -(d.pv_to_load + d.pv_to_ev); }

std::string check_balance(const SlotDispatch& d, double base_kw, double pv_kw, double tolerance) {
    const std::string at = " at slot " + std::to_string(d.slot);
    for (double v : {d.grid_to_load, d.grid_to_ev, d.pv_to_load, d.pv_to_ev,
                     d.ev_discharge_total, d.export_kw, d.ev_charge_total})
        if (!(v >= 0.0)) return "negative power field" + at;
    if (d.pv_to_load + d.pv_to_ev > pv_kw + tolerance) return "PV over-purchase" + at;
    const double supply = d.grid_to_load + d.grid_to_ev + d.pv_to_load + d.pv_to_ev +
                          d.ev_discharge_total;
    const double demand = base_kw + d.ev_charge_total + d.export_kw;
    if (std::abs(supply - demand) > tolerance)
        return "energy balance off by " + format_report(supply - demand) + " kW" + at;
    if (std::abs(d.grid_draw - (d.grid_to_load + d.grid_to_ev)) > tolerance)
        return "grid_draw mismatch" + at;
    if (std::abs(d.pv_used - (d.pv_to_load + d.pv_to_ev)) > tolerance)
        return "pv_used mismatch" + at;
    return {};
}

} // namespace evmg

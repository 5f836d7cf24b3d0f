// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "evmg/fleet.hpp"
#include "evmg/ingest.hpp"
#include "evmg/tariff.hpp"

namespace ref {

using evmg::Action;

Step battery_step(const evmg::EvSpec& ev, double soc, Action action, double dt) {
    const double rate = ev.mode == evmg::ChargeMode::M1 ? 7.0 : 19.2;
    if (action == Action::Charge) {
        const double gain = 100.0 * rate * dt * ev.charge_efficiency / ev.capacity_kwh;
        // steps ending within 1e-12 of a bound are clamped onto it
        if (soc + gain < ev.soc_max - 1e-12) return {soc + gain, rate};
        const double room = std::max(ev.soc_max - soc, 0.0);
        return {std::max(soc, ev.soc_max), room * ev.capacity_kwh / (100.0 * dt * ev.charge_efficiency)};
    }
    if (action == Action::Discharge) {
        const double loss = 100.0 * rate * dt / (ev.discharge_efficiency * ev.capacity_kwh);
        if (soc - loss > ev.soc_min + 1e-12) return {soc - loss, -rate};
        const double room = std::max(soc - ev.soc_min, 0.0);
        return {std::min(soc, ev.soc_min), -room * ev.capacity_kwh * ev.discharge_efficiency / (100.0 * dt)};
    }
    return {soc, 0.0};
}

double slot_cost(double base, double pv, double charge, double discharge, double grid_rate,
                 double pv_rate, double dt) {
    const double demand = base + charge;
    const double pv_used = std::min(pv, demand);
    const double after_pv = demand - pv_used;
    const double from_ev = std::min(discharge, after_pv);
    const double from_grid = after_pv - from_ev;
    return (grid_rate * from_grid + pv_rate * (pv_used - discharge)) * dt;
}

double balance_residual(const evmg::SlotDispatch& d, double base) {
    const double in = d.grid_to_load + d.grid_to_ev + d.pv_to_load + d.pv_to_ev + d.ev_discharge_total;
    const double out = base + d.ev_charge_total + d.export_kw;
    return in - out;
}

Enumeration enumerate_all(const evmg::ScenarioConfig& sc) {
    const auto& grid = sc.grid;
    const int n = grid.slots_per_day;
    struct Cell {
        std::size_t ev;
        int slot;
    };
    // EV-major: all steps of the first EV, then the second.
    std::vector<Cell> cells;
    for (std::size_t i = 0; i < sc.fleet.size(); ++i) {
        const auto& ev = sc.fleet[i];
        const int len = (ev.departure_slot - ev.arrival_slot + n) % n;
        for (int k = 0; k < len; ++k) cells.push_back({i, (ev.arrival_slot + k) % n});
    }
    std::vector<bool> touched(n, false);
    for (const auto& c : cells) touched[c.slot] = true;
    double untouched = 0.0;
    for (int t = 0; t < n; ++t)
        if (!touched[t])
            untouched += slot_cost(sc.base_load.values[t], sc.pv.values[t], 0, 0,
                                   sc.tariffs.grid_rate[t], sc.tariffs.pv_rate[t], grid.slot_hours);

    std::vector<int> digit(cells.size(), 0);
    Enumeration out;
    out.min_cost = std::numeric_limits<double>::infinity();
    std::vector<double> charge(n), discharge(n), soc(sc.fleet.size());
    for (;;) {
        std::fill(charge.begin(), charge.end(), 0.0);
        std::fill(discharge.begin(), discharge.end(), 0.0);
        for (std::size_t i = 0; i < sc.fleet.size(); ++i) soc[i] = sc.fleet[i].initial_soc;
        bool ok = true;
        for (std::size_t j = 0; j < cells.size() && ok; ++j) {
            const auto& ev = sc.fleet[cells[j].ev];
            double& s = soc[cells[j].ev];
            const Action a = static_cast<Action>(digit[j]);
            if (a == Action::Charge && !(s < ev.soc_max)) ok = false;
            if (a == Action::Discharge && !(s > ev.soc_min)) ok = false;
            const Step st = battery_step(ev, s, a, grid.slot_hours);
            s = st.soc;
            if (st.kw > 0) charge[cells[j].slot] += st.kw;
            else discharge[cells[j].slot] -= st.kw;
        }
        for (std::size_t i = 0; i < sc.fleet.size() && ok; ++i)
            if (soc[i] < sc.fleet[i].target_soc - 1e-9) ok = false;
        if (ok) {
            ++out.feasible;
            double cost = untouched;
            for (int t = 0; t < n; ++t)
                if (touched[t])
                    cost += slot_cost(sc.base_load.values[t], sc.pv.values[t], charge[t],
                                      discharge[t], sc.tariffs.grid_rate[t], sc.tariffs.pv_rate[t],
                                      grid.slot_hours);
            out.min_cost = std::min(out.min_cost, cost);
        }
        std::size_t j = 0;
        while (j < digit.size() && digit[j] == 2) digit[j++] = 0;
        if (j == digit.size()) break;
        ++digit[j];
    }
    return out;
}

std::vector<double> random_piecewise(std::mt19937_64& rng, int slots, int pieces, double lo,
                                     double hi) {
    std::uniform_int_distribution<int> cut(1, slots - 1);
    std::uniform_real_distribution<double> level(lo, hi);
    std::vector<int> edges{0, slots};
    for (int i = 1; i < pieces; ++i) edges.push_back(cut(rng));
    std::sort(edges.begin(), edges.end());
    std::vector<double> v(slots);
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double x = level(rng);
        for (int t = edges[i]; t < edges[i + 1]; ++t) v[t] = x;
    }
    return v;
}

namespace {

evmg::ScenarioConfig random_frame(std::mt19937_64& rng) {
    evmg::ScenarioConfig sc;
    const int n = sc.grid.slots_per_day;
    std::uniform_int_distribution<int> pieces(1, 8);
    sc.base_load = {evmg::ProfileKind::BaseLoad, random_piecewise(rng, n, pieces(rng), 20, 300)};
    auto pv = random_piecewise(rng, n, pieces(rng), 0, 150);
    // Zero PV at night for roughly half of the scenarios.
    if (rng() % 2)
        for (int t = 0; t < n; ++t)
            if (t < 24 || t >= 76) pv[t] = 0.0;
    sc.pv = {evmg::ProfileKind::PvProduction, pv};
    std::uniform_real_distribution<double> smp(0.03, 0.2);
    if (rng() % 2) {
        sc.tariffs = evmg::default_tariff(smp(rng), sc.grid);
    } else {
        sc.tariffs.grid_rate = random_piecewise(rng, n, pieces(rng), 0.03, 0.25);
        sc.tariffs.pv_rate = random_piecewise(rng, n, pieces(rng), 0.03, 0.2);
    }
    sc.dispatch.accounting = static_cast<evmg::Accounting>(rng() % 3);
    sc.dispatch.pv_merit = rng() % 4 == 0 ? evmg::PvMerit::Economic : evmg::PvMerit::Always;
    sc.policy.urgency_margin = static_cast<int>(rng() % 3);
    if (rng() % 2) {
        sc.flag_power_auto = true;
    } else {
        sc.flag_power_auto = false;
        sc.policy.flag_power_kw = std::uniform_real_distribution<double>(-50, 300)(rng);
    }
    return sc;
}

evmg::EvSpec random_ev(std::mt19937_64& rng, int index, int arrival, int departure,
                       bool losses) {
    evmg::EvSpec ev;
    ev.id = evmg::ev_id(index);
    ev.mode = rng() % 2 ? evmg::ChargeMode::M2 : evmg::ChargeMode::M1;
    ev.capacity_kwh = std::uniform_real_distribution<double>(20, 100)(rng);
    ev.arrival_slot = arrival;
    ev.departure_slot = departure;
    ev.soc_max = std::uniform_real_distribution<double>(60, 100)(rng);
    ev.target_soc = std::uniform_real_distribution<double>(40, ev.soc_max)(rng);
    if (rng() % 4 == 0) ev.target_soc = ev.soc_max;
    ev.soc_min = std::uniform_real_distribution<double>(0, std::min(30.0, ev.target_soc - 1))(rng);
    ev.initial_soc = std::uniform_real_distribution<double>(0, ev.soc_max)(rng);
    if (losses && rng() % 2) {
        ev.charge_efficiency = std::uniform_real_distribution<double>(0.8, 1.0)(rng);
        ev.discharge_efficiency = std::uniform_real_distribution<double>(0.8, 1.0)(rng);
    }
    return ev;
}

} // namespace

evmg::ScenarioConfig random_scenario(std::mt19937_64& rng, const RandomOptions& opt) {
    evmg::ScenarioConfig sc = random_frame(rng);
    const int n = sc.grid.slots_per_day;
    const int count = std::uniform_int_distribution<int>(0, opt.max_evs)(rng);
    std::uniform_int_distribution<int> slot(0, n - 1);
    for (int i = 0; i < count; ++i) {
        const int a = slot(rng);
        int d = slot(rng);
        if (d == a) d = (a + 1) % n;
        sc.fleet.push_back(random_ev(rng, i, a, d, opt.allow_efficiency_loss));
    }
    evmg::resolve(sc);
    return sc;
}

evmg::ScenarioConfig random_small_instance(std::mt19937_64& rng, int max_parked) {
    for (;;) {
        evmg::ScenarioConfig sc = random_frame(rng);
        sc.dispatch.accounting = evmg::Accounting::OffsetAndSell;
        sc.dispatch.pv_merit = evmg::PvMerit::Always;
        const int n = sc.grid.slots_per_day;
        const int width = std::uniform_int_distribution<int>(4, 8)(rng);
        const int start = std::uniform_int_distribution<int>(0, n - 1)(rng);
        const int evs = 1 + static_cast<int>(rng() % 2);
        int parked = 0;
        bool reachable = true;
        for (int i = 0; i < evs; ++i) {
            const int len = std::uniform_int_distribution<int>(1, width)(rng);
            const int offset = std::uniform_int_distribution<int>(0, width - len)(rng);
            const int a = (start + offset) % n;
            evmg::EvSpec ev = random_ev(rng, i, a, (a + len) % n, true);
            const evmg::EvState st{ev, ev.initial_soc};
            reachable = reachable && evmg::required_charge_slots(st, sc.grid) <= len;
            parked += len;
            sc.fleet.push_back(ev);
        }
        if (parked > max_parked || !reachable) continue;
        evmg::resolve(sc);
        return sc;
    }
}

evmg::ScenarioConfig fixture_in_code() {
    using evmg::ClockTime;
    evmg::ScenarioConfig sc;
    const auto hm = [](int h) { return ClockTime::hm(h, 0); };
    sc.base_load = evmg::synth_profile(evmg::ProfileKind::BaseLoad,
                                       {{hm(23), hm(6), 100}, {hm(6), hm(17), 150}, {hm(17), hm(23), 200}},
                                       sc.grid);
    sc.pv = evmg::synth_profile(evmg::ProfileKind::PvProduction,
                                {{hm(16), hm(8), 0},
                                 {hm(8), hm(10), 40},
                                 {hm(10), hm(14), 80},
                                 {hm(14), hm(16), 40}},
                                sc.grid);
    sc.tariffs = evmg::default_tariff(0.09, sc.grid);
    evmg::FleetConfig fc;
    fc.n_evs = 50;
    fc.seed = 1;
    sc.fleet_config = fc;
    sc.fleet = evmg::sample_fleet(fc, sc.grid);
    evmg::resolve(sc);
    return sc;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

TempDir::TempDir(const std::string& tag) {
    static std::mt19937_64 rng(std::random_device{}());
    for (;;) {
        path_ = std::filesystem::temp_directory_path() /
                ("evmg-" + tag + "-" + std::to_string(rng() % 1000000000));
        if (std::filesystem::create_directory(path_)) return;
    }
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

} // namespace ref

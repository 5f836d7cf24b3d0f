// SPDX-License-Identifier: Apache-2.0

#include "evmg/fleet.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "evmg/errors.hpp"

namespace evmg {

namespace {

constexpr double kMinAcceptance = 1e-6;
constexpr long kMaxRejections = 100'000'000;
constexpr int kMaxIntervalRetries = 1000;

double std_normal_cdf(double z) { return 0.5 * std::erfc(-z / std::numbers::sqrt2); }

} // namespace

double Rng::normal() {
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

double normal_mass(double mean, double std, double low, double high) {
    return std_normal_cdf((high - mean) / std) - std_normal_cdf((low - mean) / std);
}

double sample_truncated_normal(double mean, double std, double low, double high, Rng& rng) {
    if (!(low < high)) throw InvalidInput("truncation window must satisfy low < high");
    if (!(std > 0.0)) throw InvalidInput("standard deviation must be > 0");
    if (normal_mass(mean, std, low, high) < kMinAcceptance)
        throw DegenerateWindow("window [" + format_report(low) + ", " + format_report(high) +
                               ") holds < 1e-6 of Normal(" + format_report(mean) + ", " +
                               format_report(std) + ")");
    for (long i = 0; i < kMaxRejections; ++i) {
        const double x = mean + std * rng.normal();
        if (x >= low && x < high) return x;
    }
    throw DegenerateWindow("rejection sampling did not terminate");
}

void FleetConfig::validate() const {
    auto fail = [](const std::string& m) { throw InvalidInput("fleet config: " + m); };
    if (n_evs < 1) fail("n_evs must be >= 1");
    if (arrival.begin == arrival.end) fail("arrival window is empty");
    if (departure.begin == departure.end) fail("departure window is empty");
    if (arrival.end < arrival.begin || departure.end < departure.begin)
        fail("windows must not wrap midnight");
    if (!(arrival_std_h > 0.0) || !(departure_std_h > 0.0) || !(soc_std > 0.0))
        fail("standard deviations must be > 0");
    if (!(mode_split >= 0.0 && mode_split <= 1.0)) fail("mode_split must be in [0, 1]");
    if (!(capacity_kwh > 0.0)) fail("capacity_kwh must be > 0");
    if (!(soc_min >= 0.0 && soc_min < target_soc && target_soc <= soc_max && soc_max <= 100.0))
        fail("need 0 <= soc_min < target_soc <= soc_max <= 100");
    if (!(charge_efficiency > 0.0 && charge_efficiency <= 1.0) ||
        !(discharge_efficiency > 0.0 && discharge_efficiency <= 1.0))
        fail("efficiencies must be in (0, 1]");
}

std::string ev_id(int index) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "EV%03d", index + 1);
    return buf;
}

std::vector<EvSpec> sample_fleet(const FleetConfig& config, const TimeGrid& grid) {
    config.validate();
    grid.validate();
    Rng rng(config.seed);
    const double slots_per_hour = 60.0 / grid.minutes_per_slot();
    const int n_m2 = static_cast<int>(std::ceil(config.mode_split * config.n_evs - 1e-9));

    std::vector<EvSpec> fleet;
    fleet.reserve(static_cast<std::size_t>(config.n_evs));
    for (int i = 0; i < config.n_evs; ++i) {
        EvSpec ev;
        ev.id = ev_id(i);
        ev.capacity_kwh = config.capacity_kwh;
        ev.mode = i < n_m2 ? ChargeMode::M2 : ChargeMode::M1;
        ev.target_soc = config.target_soc;
        ev.soc_min = config.soc_min;
        ev.soc_max = config.soc_max;
        ev.charge_efficiency = config.charge_efficiency;
        ev.discharge_efficiency = config.discharge_efficiency;

        int attempt = 0;
        do {
            if (++attempt > kMaxIntervalRetries)
                throw InvalidInput("fleet config: " + ev.id +
                                   " arrival and departure keep landing in the same slot");
            const double arrive_h =
                sample_truncated_normal(config.arrival_mean_h, config.arrival_std_h,
                                        config.arrival.begin.hours(), config.arrival.end.hours(), rng);
            const double depart_h = sample_truncated_normal(
                config.departure_mean_h, config.departure_std_h, config.departure.begin.hours(),
                config.departure.end.hours(), rng);
            ev.arrival_slot = std::min(grid.slots_per_day - 1,
                                       static_cast<int>(std::floor(arrive_h * slots_per_hour)));
            ev.departure_slot = std::min(grid.slots_per_day - 1,
                                         static_cast<int>(std::floor(depart_h * slots_per_hour)));
        } while (ev.arrival_slot == ev.departure_slot);

        ev.initial_soc =
            sample_truncated_normal(config.soc_mean, config.soc_std, 0.0, config.soc_max, rng);
        fleet.push_back(std::move(ev));
    }
    return fleet;
}

std::vector<Violation> validate_fleet(std::span<const EvSpec> fleet, const TimeGrid& grid) {
    std::vector<Violation> out;
    auto add = [&](const EvSpec& ev, const char* field, std::string msg) {
        out.push_back({ev.id, field, std::move(msg)});
    };
    for (const auto& ev : fleet) {
        if (!(ev.capacity_kwh > 0.0)) add(ev, "capacity_kwh", "must be > 0");
        if (!grid.contains(ev.arrival_slot)) add(ev, "arrival_slot", "outside the day");
        if (!grid.contains(ev.departure_slot)) add(ev, "departure_slot", "outside the day");
        if (ev.arrival_slot == ev.departure_slot)
            add(ev, "departure_slot", "equals arrival_slot (parked for zero slots)");
        if (!(ev.soc_max <= 100.0)) add(ev, "soc_max", "must be <= 100");
        if (!(ev.initial_soc >= 0.0 && ev.initial_soc <= ev.soc_max))
            add(ev, "initial_soc",
                format_report(ev.initial_soc) + " outside [0, soc_max=" +
                    format_report(ev.soc_max) + "]");
        if (!(ev.soc_min >= 0.0 && ev.soc_min < ev.target_soc))
            add(ev, "soc_min",
                format_report(ev.soc_min) + " must be >= 0 and < target_soc=" +
                    format_report(ev.target_soc));
        if (!(ev.target_soc <= ev.soc_max))
            add(ev, "target_soc",
                format_report(ev.target_soc) + " exceeds soc_max=" + format_report(ev.soc_max));
        if (!(ev.charge_efficiency > 0.0 && ev.charge_efficiency <= 1.0))
            add(ev, "charge_efficiency", "must be in (0, 1]");
        if (!(ev.discharge_efficiency > 0.0 && ev.discharge_efficiency <= 1.0))
            add(ev, "discharge_efficiency", "must be in (0, 1]");
    }
    return out;
}

} // namespace evmg

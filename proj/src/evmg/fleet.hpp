// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "evmg/core.hpp"
#include "evmg/ev.hpp"

namespace evmg {

/// Seeded generator owned by the caller. The engine is std::mt19937_64, whose
/// output sequence is fixed by the standard; the uniform and normal transforms
/// below are implemented here so draws are identical on every platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
    /// Standard normal via the Box-Muller transform, one draw per call.
    double normal();

private:
    std::mt19937_64 engine_;
};

/// Draw from Normal(mean, std) conditioned on [low, high) by rejection.
/// Throws DegenerateWindow if the window holds less than 1e-6 probability.
double sample_truncated_normal(double mean, double std, double low, double high, Rng& rng);

/// Probability mass of Normal(mean, std) inside [low, high].
double normal_mass(double mean, double std, double low, double high);

struct ClockWindow {
    ClockTime begin;
    ClockTime end;
};

struct FleetConfig {
    int n_evs = 50;
    ClockWindow arrival{ClockTime::hm(15, 0), ClockTime::hm(21, 0)};
    ClockWindow departure{ClockTime::hm(7, 20), ClockTime::hm(13, 20)};
    double arrival_mean_h = 18.0;
    double arrival_std_h = 1.5;
    double departure_mean_h = 10.0 + 20.0 / 60.0;
    double departure_std_h = 1.5;
    double soc_mean = 15.0;
    double soc_std = 5.0;
    /// Fraction of the fleet, by index, assigned to M2.
    double mode_split = 0.5;
    std::uint64_t seed = 1;

    // Battery parameters shared by every sampled EV.
    double capacity_kwh = 64.0;
    double target_soc = 80.0;
    double soc_min = 20.0;
    double soc_max = 80.0;
    double charge_efficiency = 1.0;
    double discharge_efficiency = 1.0;

    /// Throws InvalidInput listing the first violated constraint.
    void validate() const;
};

std::string ev_id(int index);

std::vector<EvSpec> sample_fleet(const FleetConfig& config, const TimeGrid& grid);

struct Violation {
    std::string ev_id;
    std::string field;
    std::string message;
};

std::vector<Violation> validate_fleet(std::span<const EvSpec> fleet, const TimeGrid& grid);

} // namespace evmg

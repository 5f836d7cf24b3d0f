// SPDX-License-Identifier: Apache-2.0
//
// Reference models and random instance generators shared by the unit and
// acceptance tests. The reference code re-derives battery and cost arithmetic
// from the closed-form rules instead of calling the library, so a test that
// compares the two is a real cross-check.

#pragma once

#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "evmg/ev.hpp"
#include "evmg/policy.hpp"
#include "evmg/scenario.hpp"
#include "evmg/simulate.hpp"

namespace ref {

/// One slot of battery arithmetic with clamping, returning {soc, delivered kW}.
struct Step {
    double soc;
    double kw;
};
Step battery_step(const evmg::EvSpec& ev, double soc, evmg::Action action, double dt);

/// Slot cost under PV-first, discharge-offset accounting.
double slot_cost(double base, double pv, double charge, double discharge, double grid_rate,
                 double pv_rate, double dt);

/// Balance residual of a dispatch row computed field by field.
double balance_residual(const evmg::SlotDispatch& d, double base);

/// Minimum cost and number of feasible schedules, found by stepping an
/// EV-major odometer through every one of the 3^k action tables. No pruning.
struct Enumeration {
    double min_cost = 0.0;
    std::size_t feasible = 0;
};
Enumeration enumerate_all(const evmg::ScenarioConfig& scenario);

/// Profile made of `pieces` constant runs at random levels in [lo, hi].
std::vector<double> random_piecewise(std::mt19937_64& rng, int slots, int pieces, double lo,
                                     double hi);

struct RandomOptions {
    int max_evs = 50;
    bool allow_efficiency_loss = true;
};

/// Random scenario with a random fleet of up to max_evs vehicles.
evmg::ScenarioConfig random_scenario(std::mt19937_64& rng, const RandomOptions& opt = {});

/// Small instance for exhaustive search: 1 or 2 EVs parked inside a window of
/// 4 to 8 slots, at most `max_parked` parked EV-slots in total, and a target
/// reachable by every EV.
evmg::ScenarioConfig random_small_instance(std::mt19937_64& rng, int max_parked = 12);

/// Scenario built from the canonical fixture definition in code, independent
/// of the JSON loader.
evmg::ScenarioConfig fixture_in_code();

std::string read_file(const std::string& path);

/// Fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    explicit TempDir(const std::string& tag);
    ~TempDir();
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    const std::filesystem::path& path() const { return path_; }
    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }

private:
    std::filesystem::path path_;
};

} // namespace ref

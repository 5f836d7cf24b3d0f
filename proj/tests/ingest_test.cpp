// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <fstream>
#include <sstream>

#include "evmg/errors.hpp"
#include "evmg/ingest.hpp"
#include "support.hpp"

using namespace evmg;

namespace {

const TimeGrid grid;

std::string series(int rows, double value = 0.0) {
    std::ostringstream s;
    s << "slot,kw\n";
    for (int t = 0; t < rows; ++t) s << t << ',' << value << '\n';
    return s.str();
}

std::string parse_error(const std::string& text) {
    std::istringstream in(text);
    try {
        parse_profile(in, ProfileKind::BaseLoad, grid, "load.csv");
    } catch (const ParseError& e) {
        return e.what();
    }
    return {};
}

bool mentions(const std::string& text, const std::string& what) {
    return text.find(what) != std::string::npos;
}

void write(const std::filesystem::path& p, const std::string& text) {
    std::ofstream(p, std::ios::binary) << text;
}

const char* kFixtureSections = R"(
  "base_load": {"segments": [
    {"from": "23:00", "to": "06:00", "kw": 100},
    {"from": "06:00", "to": "17:00", "kw": 150},
    {"from": "17:00", "to": "23:00", "kw": 200}]},
  "pv": {"segments": [
    {"from": "16:00", "to": "08:00", "kw": 0},
    {"from": "08:00", "to": "10:00", "kw": 40},
    {"from": "10:00", "to": "14:00", "kw": 80},
    {"from": "14:00", "to": "16:00", "kw": 40}]},
  "fleet": {"n_evs": 50, "seed": 1})";

std::string scenario_with(const std::string& extra) {
    return std::string("{") + kFixtureSections + extra + "}";
}

std::vector<std::string> scenario_problems(const std::string& text) {
    try {
        parse_scenario(text, ".");
    } catch (const ScenarioError& e) {
        return e.problems();
    }
    return {};
}

} // namespace

TEST_CASE("profile CSV validation") {
    std::istringstream ok(series(96));
    const Profile p = parse_profile(ok, ProfileKind::BaseLoad, grid, "load.csv");
    CHECK(p.values == std::vector<double>(96, 0.0));

    CHECK(mentions(parse_error(series(95)), "expected 96 rows"));
    CHECK(mentions(parse_error(series(97)), "found 97"));

    std::string neg = series(96, 1.0);
    neg.replace(neg.find("\n12,1\n"), 6, "\n12,-5\n");
    const std::string msg = parse_error(neg);
    CHECK(mentions(msg, "row 12"));
    CHECK(mentions(msg, "negative"));

    std::string dup = series(96, 1.0);
    dup.replace(dup.find("\n13,1\n"), 6, "\n12,1\n");
    CHECK(mentions(parse_error(dup), "expected slot 13"));

    CHECK(mentions(parse_error("slot,kw\n0,abc\n"), "load.csv"));
    CHECK_FALSE(parse_error("kw\n").empty());
}

TEST_CASE("profile write/load round trip is exact") {
    ref::TempDir dir("profile");
    std::mt19937_64 rng(5);
    Profile p{ProfileKind::PvProduction, ref::random_piecewise(rng, 96, 9, 0, 123.456)};
    p.values[3] = 1.0 / 3.0;
    p.values[4] = 1e-300;
    write_profile(dir / "pv.csv", p);
    CHECK(load_profile(dir / "pv.csv", ProfileKind::PvProduction, grid) == p);
    CHECK_THROWS_AS(load_profile(dir / "missing.csv", ProfileKind::PvProduction, grid), ParseError);
}

TEST_CASE("synthetic profiles") {
    const auto hm = [](int h) { return ClockTime::hm(h, 0); };
    const Profile flat = synth_profile(ProfileKind::BaseLoad, {{hm(0), hm(24), 100}}, grid);
    CHECK(flat.values == std::vector<double>(96, 100.0));

    const Profile base = synth_profile(
        ProfileKind::BaseLoad, {{hm(23), hm(6), 100}, {hm(6), hm(17), 150}, {hm(17), hm(23), 200}}, grid);
    int n100 = 0, n150 = 0, n200 = 0;
    for (double v : base.values) {
        n100 += v == 100;
        n150 += v == 150;
        n200 += v == 200;
    }
    // (1 + 6) h, 11 h and 6 h at four slots per hour
    CHECK(n100 == 4 * 7);
    CHECK(n150 == 4 * 11);
    CHECK(n200 == 4 * 6);

    CHECK_THROWS_AS(synth_profile(ProfileKind::BaseLoad, {{hm(0), hm(12), 1}}, grid), DefinitionError);
    CHECK_THROWS_AS(synth_profile(ProfileKind::BaseLoad, {{hm(0), hm(24), -1}}, grid), DefinitionError);
}

TEST_CASE("irradiance conversion") {
    CHECK(irradiance_to_power(std::vector<double>(96, 0.0), 10, 0.2).values ==
          std::vector<double>(96, 0.0));
    CHECK(irradiance_to_power(std::vector<double>{1000}, 100, 0.2).values[0] == doctest::Approx(20.0));
    CHECK(irradiance_to_power(std::vector<double>{500}, 1, 1).values[0] == doctest::Approx(0.5));
    CHECK_THROWS_AS(irradiance_to_power(std::vector<double>{-1}, 1, 1), InvalidInput);
    CHECK_THROWS_AS(irradiance_to_power(std::vector<double>{1}, 0, 1), InvalidInput);
    CHECK_THROWS_AS(irradiance_to_power(std::vector<double>{1}, 1, 1.5), InvalidInput);
}

TEST_CASE("fleet CSV round trip") {
    ref::TempDir dir("fleet");
    FleetConfig c;
    c.n_evs = 200;
    c.seed = 9;
    const auto fleet = sample_fleet(c, grid);
    write_fleet(dir / "fleet.csv", fleet);
    CHECK(load_fleet(dir / "fleet.csv") == fleet);

    std::istringstream bad_header("id,mode\nEV001,M1\n");
    CHECK_THROWS_AS(parse_fleet(bad_header, "f.csv"), ParseError);
    std::istringstream dup(std::string(kFleetCsvHeader) +
                           "\nA,64,M1,70,30,15,80,20,80\nA,64,M1,70,30,15,80,20,80\n");
    CHECK_THROWS_AS(parse_fleet(dup, "f.csv"), ParseError);
    std::istringstream mode(std::string(kFleetCsvHeader) + "\nA,64,M3,70,30,15,80,20,80\n");
    CHECK_THROWS_AS(parse_fleet(mode, "f.csv"), ParseError);
}

TEST_CASE("fixture scenario file resolves the flag to the mean net load") {
    const ScenarioConfig sc = load_scenario(EVMG_FIXTURE);
    const ScenarioConfig code = ref::fixture_in_code();
    CHECK(sc.base_load == code.base_load);
    CHECK(sc.pv == code.pv);
    CHECK(sc.tariffs == code.tariffs);
    CHECK(sc.fleet == code.fleet);
    double sum = 0.0;
    for (int t = 0; t < 96; ++t) sum += sc.base_load.values[t] - sc.pv.values[t];
    CHECK(sc.policy.flag_power_kw == doctest::Approx(sum / 96).epsilon(1e-14));
    CHECK(sc.flag_power_auto);
    CHECK(scenario_digest(sc) == scenario_digest(code));

    ScenarioConfig again = sc;
    resolve(again);
    CHECK(scenario_digest(again) == scenario_digest(sc));
}

TEST_CASE("scenario problems are aggregated") {
    auto probs = scenario_problems(R"({"pv": {"segments": [{"from": "00:00", "to": "24:00", "kw": 0}]},
                                       "fleet": {"n_evs": 3}})");
    REQUIRE(probs.size() == 1);
    CHECK(mentions(probs[0], "base_load"));

    probs = scenario_problems(scenario_with(R"(, "policy": {"flag_power": "auto", "flag_power": 100})"));
    REQUIRE_FALSE(probs.empty());
    CHECK(mentions(probs[0], "flag_power"));

    probs = scenario_problems(scenario_with(R"(, "polcy": {}, "accounting": "free", "grid_cap_kw": -1)"));
    CHECK(probs.size() == 3);

    probs = scenario_problems(scenario_with(R"(, "policy": {"method": "greedy", "flag_power": "high"})"));
    CHECK(probs.size() == 2);

    CHECK(scenario_problems(scenario_with("")).empty());
    CHECK_THROWS_AS(parse_scenario("{", "."), ScenarioError);
    CHECK_THROWS_AS(load_scenario("/nonexistent/scenario.json"), ScenarioError);
}

TEST_CASE("scenario options") {
    const ScenarioConfig sc = parse_scenario(scenario_with(R"(,
        "tariff": {"pv_rate": 0.07},
        "policy": {"method": "uncontrolled", "flag_power": 120, "urgency_margin": 2},
        "accounting": "sell_only", "pv_merit": "economic", "grid_cap_kw": 900,
        "uncontrolled_without_pv": true, "output_dir": "runs/a")"),
                                             "/base");
    CHECK(sc.policy.method == Method::Uncontrolled);
    CHECK(sc.policy.flag_power_kw == 120);
    CHECK_FALSE(sc.flag_power_auto);
    CHECK(sc.policy.urgency_margin == 2);
    CHECK(sc.dispatch.accounting == Accounting::SellOnly);
    CHECK(sc.dispatch.pv_merit == PvMerit::Economic);
    CHECK(sc.dispatch.grid_cap_kw == 900.0);
    CHECK(sc.uncontrolled_without_pv);
    CHECK(sc.output_dir == "/base/runs/a");
    CHECK(sc.tariffs.pv_rate == std::vector<double>(96, 0.07));
}

TEST_CASE("file-based scenario sources") {
    ref::TempDir dir("scenario");
    write(dir / "load.csv", series(96, 120));
    write(dir / "sun.csv", series(96, 500));
    write(dir / "smp.csv", series(96, 0.08));
    FleetConfig c;
    c.n_evs = 4;
    write_fleet(dir / "fleet.csv", sample_fleet(c, grid));
    write(dir / "s.json", R"({
        "base_load": {"file": "load.csv"},
        "pv": {"irradiance_file": "sun.csv", "panel_area_m2": 200, "panel_efficiency": 0.2},
        "tariff": {"pv_rate_file": "smp.csv",
                   "grid_windows": [{"from": "00:00", "to": "12:00", "rate": 0.1},
                                    {"from": "12:00", "to": "24:00", "rate": 0.2}]},
        "fleet": {"file": "fleet.csv", "charge_efficiency": 0.9}})");
    const ScenarioConfig sc = load_scenario(dir / "s.json");
    CHECK(sc.base_load.values == std::vector<double>(96, 120.0));
    CHECK(sc.pv.values[0] == doctest::Approx(20.0));
    CHECK(sc.tariffs.grid_rate[47] == 0.1);
    CHECK(sc.tariffs.grid_rate[48] == 0.2);
    CHECK(sc.tariffs.pv_rate[5] == 0.08);
    REQUIRE(sc.fleet.size() == 4);
    CHECK(sc.fleet[0].charge_efficiency == 0.9);
    CHECK_FALSE(sc.fleet_config.has_value());
    ScenarioConfig copy = sc;
    CHECK_THROWS_AS(reseed(copy, 3), ScenarioError);
}

TEST_CASE("fleet config JSON") {
    const FleetConfig c = parse_fleet_config(R"({"n_evs": 7, "seed": 3, "arrival_window": ["16:00", "20:00"]})");
    CHECK(c.n_evs == 7);
    CHECK(c.seed == 3);
    CHECK(c.arrival.begin == ClockTime::hm(16, 0));
    CHECK(c.arrival.end == ClockTime::hm(20, 0));
    CHECK_THROWS_AS(parse_fleet_config(R"({"n_evs": 0})"), ScenarioError);
    CHECK_THROWS_AS(parse_fleet_config(R"({"size": 3})"), ScenarioError);
}

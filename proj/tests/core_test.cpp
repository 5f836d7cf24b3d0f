// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>
#include <random>

#include "evmg/core.hpp"
#include "evmg/errors.hpp"
#include "evmg/ev.hpp"
#include "evmg/tariff.hpp"

using namespace evmg;

namespace {
const TimeGrid grid;

EvSpec parked(int arrival, int departure) {
    EvSpec ev;
    ev.id = "EV001";
    ev.arrival_slot = arrival;
    ev.departure_slot = departure;
    return ev;
}
} // namespace

TEST_CASE("time grid covers one day") {
    CHECK(grid.slots_per_day * grid.slot_hours == 24.0);
    CHECK(grid.minutes_per_slot() == 15);
    CHECK(grid.wrap(-1) == 95);
    CHECK(grid.wrap(96) == 0);
    CHECK_NOTHROW(grid.validate());
    CHECK_THROWS_AS(TimeGrid::make(7), InvalidInput);
    CHECK(TimeGrid::make(24).slot_hours == 1.0);
}

TEST_CASE("slot_of_time") {
    CHECK(slot_of_time(ClockTime::hm(0, 0), grid) == 0);
    CHECK(slot_of_time(ClockTime::hm(23, 45), grid) == 95);
    CHECK(slot_of_time(ClockTime::hm(10, 30), grid) == 630 / 15);
    CHECK(slot_of_time(ClockTime::hm(7, 20), grid) == 29);
    CHECK_THROWS_AS(slot_of_time(ClockTime::hm(24, 0), grid), InvalidInput);
    CHECK_THROWS_AS(slot_of_time(ClockTime{-1}, grid), InvalidInput);
    for (int t = 0; t < grid.slots_per_day; ++t) CHECK(slot_of_time(slot_start(t, grid), grid) == t);
}

TEST_CASE("clock parsing") {
    CHECK(ClockTime::parse("07:20").minutes == 440);
    CHECK(ClockTime::parse("7:20").minutes == 440);
    CHECK(ClockTime::parse("24:00").minutes == 1440);
    CHECK(ClockTime::hm(9, 5).str() == "09:05");
    CHECK_THROWS_AS(ClockTime::parse("24:01"), InvalidInput);
    CHECK_THROWS_AS(ClockTime::parse("12:60"), InvalidInput);
    CHECK_THROWS_AS(ClockTime::parse("noon"), InvalidInput);
}

TEST_CASE("rasterize rejects bad definitions") {
    const auto hm = [](int h, int m = 0) { return ClockTime::hm(h, m); };
    CHECK_THROWS_AS(rasterize({{hm(0), hm(12), 1.0}}, grid), DefinitionError);
    CHECK_THROWS_AS(rasterize({{hm(0), hm(13), 1.0}, {hm(12), hm(24), 2.0}}, grid), DefinitionError);
    CHECK_THROWS_AS(rasterize({{hm(0), hm(12, 10), 1.0}, {hm(12, 10), hm(24), 2.0}}, grid),
                    DefinitionError);
    const auto v = rasterize({{hm(22), hm(2), 5.0}, {hm(2), hm(22), 1.0}}, grid);
    CHECK(v[0] == 5.0);
    CHECK(v[95] == 5.0);
    CHECK(v[88] == 5.0);
    CHECK(v[87] == 1.0);
    CHECK(v[8] == 1.0);
}

TEST_CASE("tariff lookup at window interiors") {
    const auto s = default_tariff(0.09, grid);
    const auto at = [&](int h, int m) {
        return tariff_rate(s, PriceSource::Grid, slot_of_time(ClockTime::hm(h, m), grid));
    };
    CHECK(at(2, 0) == 0.055);
    CHECK(at(10, 30) == 0.179);
    CHECK(at(9, 30) == 0.108);
    CHECK(at(23, 0) == 0.055);
    CHECK(at(8, 45) == 0.055);
    CHECK(at(12, 15) == 0.108);
    CHECK(at(16, 45) == 0.179);
    CHECK(at(17, 0) == 0.108);
    CHECK(tariff_rate(s, PriceSource::Pv, 40) == 0.09);
    CHECK_THROWS_AS(tariff_rate(s, PriceSource::Grid, 96), InvalidInput);
    CHECK_THROWS_AS(tariff_rate(s, PriceSource::Grid, -1), InvalidInput);
}

TEST_CASE("tariff is constant inside each window") {
    // window edges in hours, listed independently of the library
    const int edges[] = {0, 9, 10, 12, 13, 17, 23, 24};
    const auto s = default_tariff(0.09, grid);
    for (int w = 0; w + 1 < 8; ++w) {
        const double first = s.grid_rate[edges[w] * 4];
        for (int t = edges[w] * 4; t < edges[w + 1] * 4; ++t) CHECK(s.grid_rate[t] == first);
    }
}

TEST_CASE("soc_after arithmetic") {
    EvSpec ev = parked(0, 10);
    ev.initial_soc = 15;
    SocStep s = soc_after({ev, 15.0}, 7.0, grid);
    CHECK(s.soc == doctest::Approx(15 + 100.0 * 7 * 0.25 / 64).epsilon(1e-15));
    CHECK(s.soc == doctest::Approx(17.734375));
    CHECK(s.delivered_kw == 7.0);

    s = soc_after({ev, 42.0}, 0.0, grid);
    CHECK(s.soc == 42.0);
    CHECK(s.delivered_kw == 0.0);

    s = soc_after({ev, 80.0}, 7.0, grid);
    CHECK(s.soc == 80.0);
    CHECK(s.delivered_kw == 0.0);

    // partial step: 1 % of 64 kWh = 0.64 kWh = 2.56 kW for a quarter hour
    s = soc_after({ev, 79.0}, 7.0, grid);
    CHECK(s.soc == 80.0);
    CHECK(s.delivered_kw == doctest::Approx(2.56));

    s = soc_after({ev, 20.5}, -7.0, grid);
    CHECK(s.soc == 20.0);
    CHECK(s.delivered_kw == doctest::Approx(-1.28));

    CHECK_THROWS_AS(soc_after({ev, 50.0}, 7.5, grid), InvalidInput);
    CHECK_THROWS_AS(soc_after({ev, 50.0}, -19.2, grid), InvalidInput);
    ev.mode = ChargeMode::M2;
    CHECK_NOTHROW(soc_after({ev, 50.0}, -19.2, grid));
}

TEST_CASE("soc_after efficiencies") {
    EvSpec ev = parked(0, 10);
    ev.charge_efficiency = 0.9;
    ev.discharge_efficiency = 0.8;
    const SocStep up = soc_after({ev, 50.0}, 7.0, grid);
    CHECK(up.soc == doctest::Approx(50 + 100.0 * 7 * 0.25 * 0.9 / 64));
    const SocStep down = soc_after({ev, 50.0}, -7.0, grid);
    CHECK(down.soc == doctest::Approx(50 - 100.0 * 7 * 0.25 / 0.8 / 64));
}

TEST_CASE("soc_after is monotone in power") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> soc(0, 80), p(-19.2, 19.2), eta(0.7, 1.0);
    EvSpec ev = parked(0, 10);
    ev.mode = ChargeMode::M2;
    for (int i = 0; i < 2000; ++i) {
        ev.charge_efficiency = eta(rng);
        ev.discharge_efficiency = eta(rng);
        const double s0 = soc(rng);
        double a = p(rng), b = p(rng);
        if (a > b) std::swap(a, b);
        CHECK(soc_after({ev, s0}, a, grid).soc <= soc_after({ev, s0}, b, grid).soc);
    }
}

TEST_CASE("charge then discharge round trip") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> soc(30, 60), p(0.1, 7.0), eta(0.7, 0.99);
    EvSpec ev = parked(0, 10);
    for (int i = 0; i < 500; ++i) {
        const double s0 = soc(rng);
        const double kw = p(rng);
        ev.charge_efficiency = 1.0;
        ev.discharge_efficiency = 1.0;
        const double back = soc_after({ev, soc_after({ev, s0}, kw, grid).soc}, -kw, grid).soc;
        CHECK(std::abs(back - s0) <= 1e-12);

        ev.charge_efficiency = eta(rng);
        ev.discharge_efficiency = eta(rng);
        const double lossy = soc_after({ev, soc_after({ev, s0}, kw, grid).soc}, -kw, grid).soc;
        CHECK(lossy < s0);
    }
}

TEST_CASE("is_parked on the circular day") {
    const EvSpec ev = parked(72, 36);
    CHECK(is_parked(ev, 0, grid));
    CHECK_FALSE(is_parked(ev, 50, grid));
    CHECK_FALSE(is_parked(ev, 36, grid));
    CHECK(is_parked(ev, 72, grid));
    CHECK(is_parked(ev, 35, grid));
    CHECK_THROWS_AS(is_parked(ev, 96, grid), InvalidInput);
    CHECK(slots_to_departure(ev, 72, grid) == 60);
    CHECK(slots_to_departure(ev, 35, grid) == 1);
    CHECK(slots_to_departure(ev, 50, grid) == 0);
}

TEST_CASE("is_parked marks exactly the interval length") {
    for (int a = 0; a < 96; a += 5) {
        for (int d = 0; d < 96; d += 7) {
            if (a == d) continue;
            const EvSpec ev = parked(a, d);
            int count = 0;
            for (int t = 0; t < 96; ++t) count += is_parked(ev, t, grid);
            CHECK(count == ((d - a) % 96 + 96) % 96);
            CHECK(parked_duration(ev, grid) == count);
        }
    }
}

TEST_CASE("number formatting") {
    CHECK(format_exact(0.1) == "0.1");
    CHECK(std::stod(format_exact(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(format_report(1.0 / 3.0) == "0.333333333");
    CHECK(format_report(755) == "755");
    CHECK(round_report(123.4567891234) == 123.456789);
}

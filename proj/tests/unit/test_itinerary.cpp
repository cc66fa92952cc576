#include <cmath>
#include <stdexcept>

#include "doctest.h"
#include "rendezline/itinerary.hpp"

using namespace rendezline;

namespace {

double power(double r, int i) {
    double p = 1.0;
    for (int j = 0; j < i; ++j) p *= r;
    return p;
}

}  // namespace

TEST_CASE("expansion sequence") {
    const ExpansionSchedule s(1.26);
    CHECK(s.f(-1) == 0.0);
    CHECK(s.f(0) == 1.0);
    CHECK(s.f(4) == doctest::Approx(2.52047376).epsilon(1e-12));
    for (int i = 0; i < 30; ++i) CHECK(s.f(i) == doctest::Approx(power(1.26, i)).epsilon(1e-12));
    CHECK_THROWS_AS(s.f(-2), std::invalid_argument);

    const ExpansionSchedule shifted(1.26, 0.5);
    CHECK(shifted.f(2) == doctest::Approx(std::pow(1.26, 2.5)));
    CHECK(shifted.nominal_f(2) == doctest::Approx(std::pow(1.26, 3.0)));
    CHECK(shifted.nominal_f(-1) == 0.0);
}

TEST_CASE("noisy schedule is clamped and order independent") {
    const GaussianNoise noise{};
    const ExpansionSchedule a(1.26, 0.0, noise, 99);
    const ExpansionSchedule b(1.26, 0.0, noise, 99);
    const double late = a.f(12);
    for (int i = 0; i <= 12; ++i) CHECK(b.f(i) >= 0.0);
    CHECK(b.f(12) == late);
    CHECK(a.f(3) == b.f(3));
    CHECK(a.nominal_f(5) == doctest::Approx(power(1.26, 5)));
    // mu = -1.843 pushes the first radii to zero most of the time
    int zeros = 0;
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        zeros += ExpansionSchedule(1.26, 0.0, noise, seed).f(0) == 0.0;
    }
    CHECK(zeros > 190);
}

TEST_CASE("round plans") {
    const ExpansionSchedule s(1.26);
    SUBCASE("round 0 heads") {
        const RoundPlan p = round_plan(s, 0, true);
        CHECK(p.start_offset == 0.0);
        CHECK(p.phase1_target_offset == doctest::Approx(1.0));
        CHECK(p.phase2_target_offset == doctest::Approx(-1.26));
        CHECK(p.phase1_nominal_duration == doctest::Approx(1.0));
        CHECK(p.phase2_nominal_duration == doctest::Approx(2.26));
    }
    SUBCASE("round 1 tails") {
        const RoundPlan p = round_plan(s, 1, false, true);
        CHECK(p.start_offset == doctest::Approx(-1.26));
        CHECK(p.phase1_target_offset == doctest::Approx(-1.5876));
        CHECK(p.phase2_target_offset == doctest::Approx(2.000376));
        CHECK(p.phase1_nominal_duration == doctest::Approx(1.5876 + 1.26));
        CHECK(p.phase2_nominal_duration == doctest::Approx(2.000376 + 1.5876));
    }
    SUBCASE("heads and tails mirror each other") {
        for (int i = 0; i < 8; ++i) {
            const RoundPlan h = round_plan(s, i, true, true);
            const RoundPlan t = round_plan(s, i, false, false);
            CHECK(h.start_offset == -t.start_offset);
            CHECK(h.phase1_target_offset == -t.phase1_target_offset);
            CHECK(h.phase2_target_offset == -t.phase2_target_offset);
            CHECK(h.phase1_nominal_duration == t.phase1_nominal_duration);
        }
    }
    SUBCASE("travel fits in the nominal durations") {
        for (int i = 1; i < 10; ++i) {
            for (bool prev : {true, false}) {
                for (bool heads : {true, false}) {
                    const RoundPlan p = round_plan(s, i, heads, prev);
                    CHECK(std::abs(p.phase1_target_offset - p.start_offset) <=
                          p.phase1_nominal_duration + 1e-12);
                    CHECK(std::abs(p.phase2_target_offset - p.phase1_target_offset) <=
                          p.phase2_nominal_duration + 1e-12);
                }
            }
        }
    }
}

TEST_CASE("unsuccessful round distances") {
    const ExpansionSchedule s(1.26);
    CHECK(unsuccessful_round_distance(s, 0, true) == doctest::Approx(3.26));
    CHECK(unsuccessful_round_distance(s, 0, false) == doctest::Approx(3.26));
    const double repeat = power(1.26, 3) + 2 * power(1.26, 2) + 1.26;
    CHECK(unsuccessful_round_distance(s, 1, true) == doctest::Approx(repeat));
    CHECK(unsuccessful_round_distance(s, 1, true) == doctest::Approx(6.43558).epsilon(1e-6));
    CHECK(unsuccessful_round_distance(s, 1, false) == doctest::Approx(repeat - 2 * 1.26));
    CHECK(unsuccessful_round_distance(s, 1, false) == doctest::Approx(3.91558).epsilon(1e-6));
}

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "rendezline/analysis.hpp"

using namespace rendezline;
using namespace rendezline::analysis;

namespace {

// Row c of Pascal's triangle by addition only.
std::vector<double> pascal_row(int c) {
    std::vector<std::uint64_t> row{1};
    for (int i = 0; i < c; ++i) {
        std::vector<std::uint64_t> next(row.size() + 1, 0);
        for (std::size_t j = 0; j < row.size(); ++j) {
            next[j] += row[j];
            next[j + 1] += row[j];
        }
        row = next;
    }
    return {row.begin(), row.end()};
}

// Probability of H_i by enumerating every flip sequence.
double heads_event_by_enumeration(int c) {
    int hits = 0;
    for (std::uint32_t bits = 0; bits < (1u << c); ++bits) {
        const int x = __builtin_popcount(bits);
        const bool in = x == c / 2 - 1 || x == (c + 1) / 2 || x == (c + 1) / 2 + 1 ||
                        (c % 2 == 1 && x == c / 2);
        hits += in;
    }
    return hits / std::exp2(c);
}

}  // namespace

TEST_CASE("binomial head counts") {
    CHECK(binom_heads_prob(4, 2) == 0.375);
    CHECK(binom_heads_prob(8, 4) == 0.2734375);
    for (int c = 0; c <= 10; ++c) CHECK(binom_heads_prob(c, 0) == std::exp2(-c));
    for (int c : {20, 40, 64}) {
        const auto row = pascal_row(c);
        for (int k = 0; k <= c; ++k) {
            CHECK(binom_heads_prob(c, k) == doctest::Approx(row[k] / std::exp2(c)).epsilon(1e-15));
        }
    }
    CHECK_THROWS_AS(binom_heads_prob(65, 1), std::invalid_argument);
    CHECK_THROWS_AS(binom_heads_prob(4, 5), std::invalid_argument);
}

TEST_CASE("H_i probability matches enumeration") {
    for (int c = 4; c <= 20; ++c) {
        CHECK(heads_event_prob(c) == doctest::Approx(heads_event_by_enumeration(c)).epsilon(1e-14));
    }
    CHECK(heads_event_prob(4) >= 0.5);
    CHECK(heads_event_prob(19) >= 0.5);
    CHECK(heads_event_prob(20) < 0.5);  // the three-value window thins out for large even c
    CHECK_THROWS_AS(heads_event_prob(3), std::invalid_argument);
}

TEST_CASE("cluster distance and reach") {
    CHECK(max_cluster_distance(8, 8, 4, 10) == 80);
    CHECK(max_cluster_distance(8, 4, 2, 1) == 12);
    CHECK(max_cluster_distance(6, 6, 1, 2.5) == 5.0);
    CHECK(effective_heads(8, 3) == 3);
    CHECK(effective_heads(8, 6) == 2);

    const double d = 1.26 * 1.26;
    const auto p = AnalysisParams::make(4, 1, 1.26, d, 4, 2);
    CHECK(p.c_star_u == 2);
    CHECK(p.alpha == doctest::Approx(3.5));
    CHECK(lemma1_reach_predicate(p, 4));
    CHECK_FALSE(lemma1_reach_predicate(p, 0));
    CHECK_THROWS_AS(AnalysisParams::make(4, 1, 1.26, d, 4, 5), std::invalid_argument);
}

TEST_CASE("tail bound") {
    CHECK(tail_bound_Ri(4, 1.0, 5.0) == doctest::Approx(0.5));
    CHECK(tail_bound_Ri(4, 0.0, 0.0) == 0.0);
    CHECK(tail_bound_Ri(4, 0.0, 20.0) == doctest::Approx(400.0 / (std::exp2(20) * 2)));
    CHECK(tail_bound_Ri(4, 0.0, 20.0) == doctest::Approx(1.907e-4).epsilon(1e-3));
    CHECK(tail_bound_Ri(1024, 0.0, 3.0) == doctest::Approx(std::pow(3, 10) / (8 * 3628800.0)));
    CHECK(tail_bound_Ri(1024, 0.0, 10.0) == 1.0);
    CHECK(log_factorial(4) == doctest::Approx(2.0));
    CHECK(log_factorial(8) == doctest::Approx(6.0));
    CHECK_THROWS_AS(tail_bound_Ri(4, 2.0, 1.0), std::invalid_argument);
}

TEST_CASE("stage bounds") {
    const double r = 1.26;
    const double r4 = r * r * r * r;
    const StageBounds s = stage_bounds_sync(4, 4, r);
    CHECK(s.stage1 == doctest::Approx(3.26 * 4 * r4 / (r * r - 1)));
    CHECK(s.stage1 == doctest::Approx(55.93).epsilon(1e-3));
    CHECK(s.stage3 == doctest::Approx(2 * std::pow(4, 0.67) * r4 * 3.26 / ((2 - r * r) * 2)));
    CHECK(s.stage3 == doctest::Approx(50.44).epsilon(1e-3));
    for (int n : {4, 9, 100}) {
        for (int k : {1, 5}) {
            const StageBounds a = stage_bounds_sync(n, k, r);
            CHECK(a.stage2 / a.stage1 == doctest::Approx(std::pow(n, 0.67)));
            const StageBounds b = stage_bounds_async(n, k, r);
            CHECK(b.stage1 / a.stage1 == doctest::Approx(std::pow(n, 0.84) * std::pow(r, 6)));
        }
    }
    const double async_b1 = 3.26 * 4 * r4 / (r * r - 1) * std::pow(4, 0.84) * std::pow(r, 6);
    CHECK(stage_bounds_async(4, 4, r).stage1 == doctest::Approx(async_b1));
    CHECK(async_b1 > 700);
    CHECK(async_b1 < 730);
    CHECK_THROWS_AS(stage_bounds_sync(4, 4, std::sqrt(2.0)), std::invalid_argument);
    CHECK_THROWS_AS(stage_bounds_async(4, 4, 1.5), std::invalid_argument);
}

TEST_CASE("competitive ratio bound does not depend on d") {
    for (Mode mode : {Mode::Sync, Mode::Async}) {
        const double a = competitive_ratio_bound(mode, 8, 10.0, 1.26);
        CHECK(competitive_ratio_bound(mode, 8, 1000.0, 1.26) == doctest::Approx(a));
    }
    const StageBounds s = stage_bounds_sync(8, 3, 1.26);
    CHECK(competitive_ratio_bound(Mode::Sync, 8, std::pow(1.26, 3), 1.26) ==
          doctest::Approx(s.total() / (7 * std::pow(1.26, 3))));
}

TEST_CASE("async meeting inequalities") {
    const double r = 1.26;
    const double d = std::pow(r, 5);
    const auto p = AnalysisParams::make(8, 4, r, d, 6, 3);
    const double maxdist = (8 - 6 + 3) * 2 * d;
    for (int i = 5; i < 25; ++i) {
        for (int delta = 0; delta < 4; ++delta) {
            const int lo = i - delta;
            CHECK(async_meet_predicate(AsyncMeetQuery::make(i, lo, MeetEvent::E2), p) ==
                  (std::pow(r, 2 * i + 1) >= maxdist + std::pow(r, 2 * lo)));
            CHECK(async_meet_predicate(AsyncMeetQuery::make(i, lo, MeetEvent::E3), p) ==
                  (std::pow(r, 2 * i) >= maxdist + std::pow(r, 2 * lo)));
            CHECK(async_meet_predicate(AsyncMeetQuery::make(i, lo, MeetEvent::E4), p) ==
                  (std::pow(r, 2 * i + 1) >= maxdist + std::pow(r, 2 * lo + 2)));
            CHECK(async_meet_predicate(AsyncMeetQuery::make(i, i + delta, MeetEvent::E1), p) ==
                  (std::pow(r, 2 * (i + delta)) >= maxdist + std::pow(r, 2 * i - 1)));
        }
    }
    // E4 with equal rounds needs r^(2i+1) >= maxdist + r^(2i+2), impossible.
    CHECK_FALSE(async_meet_predicate(AsyncMeetQuery::make(30, 30, MeetEvent::E4), p));
    CHECK(AsyncMeetQuery::make(7, 4, MeetEvent::E2).delta == 3);
}

TEST_CASE("lemma grid holds for r = 1.26") {
    for (int n = 4; n <= 16; ++n) {
        for (int k = 1; k <= 10; ++k) {
            const LemmaGridCounts c = lemma_grid_counts(n, k, 1.26);
            CHECK(c.reach_checked > 0);
            CHECK(c.reach_failed == 0);
            CHECK(c.meet_failed == 0);
        }
    }
}

TEST_CASE("halving recurrence") {
    CHECK(min_rounds_recurrence(1) == 0);
    CHECK(min_rounds_recurrence(2) == 1);
    CHECK(min_rounds_recurrence(5) == 3);
    CHECK(min_rounds_recurrence(8) == 3);
    CHECK(min_rounds_recurrence(9) == 4);
    CHECK_THROWS_AS(min_rounds_recurrence(0), std::invalid_argument);
}

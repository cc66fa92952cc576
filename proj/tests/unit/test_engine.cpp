#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <string>

#include "doctest.h"
#include "rendezline/engine.hpp"

using namespace rendezline;

namespace {

SimConfig pair_config(double d, Mode mode = Mode::Sync) {
    SimConfig c;
    c.n = 2;
    c.d = d;
    c.r = 1.26;
    c.mode = mode;
    return c;
}

Cluster cluster(std::vector<RobotId> members, RobotId leader, int round) {
    Cluster c;
    c.members = std::move(members);
    c.leader = leader;
    c.round = round;
    return c;
}

}  // namespace

TEST_CASE("next_meeting on single legs") {
    SUBCASE("closing legs meet halfway") {
        const auto m = next_meeting({0, 0, 10, 10}, {0, 10, 10, 0}, 0, 10);
        REQUIRE(m);
        CHECK(m->time == doctest::Approx(5.0));
        CHECK(m->position == doctest::Approx(5.0));
    }
    SUBCASE("tandem legs never meet") {
        CHECK_FALSE(next_meeting({0, 0, 10, 10}, {0, 10, 10, 20}, 0, 10));
    }
    SUBCASE("coinciding endpoints count") {
        const auto m = next_meeting({0, -1.26, 2.8476, 1.5876}, {0, 4.4352, 2.8476, 1.5876}, 0,
                                    2.8476);
        REQUIRE(m);
        CHECK(m->time == doctest::Approx(2.8476));
        CHECK(m->position == doctest::Approx(1.5876));
    }
    SUBCASE("moving onto a stationary leg") {
        const auto m = next_meeting({0, 0, 4, 4}, {0, 3, 10, 3}, 0, 10);
        REQUIRE(m);
        CHECK(m->time == doctest::Approx(3.0));
    }
    SUBCASE("outside the horizon") {
        CHECK_FALSE(next_meeting({0, 0, 10, 10}, {0, 10, 10, 0}, 0, 4.0));
    }
}

TEST_CASE("merge rules") {
    const Cluster a = cluster({1, 2, 3}, 1, 6);
    const Cluster b = cluster({4, 5}, 4, 6);
    const Cluster sync = merge(a, b, Mode::Sync);
    CHECK(sync.members == std::vector<RobotId>{1, 2, 3, 4, 5});
    CHECK(sync.leader == 1);

    CHECK(merge(cluster({1}, 1, 3), cluster({2}, 2, 5), Mode::Async).leader == 2);
    CHECK(merge(cluster({1}, 1, 5), cluster({2}, 2, 3), Mode::Async).leader == 1);
    CHECK(merge(cluster({2}, 2, 4), cluster({7}, 7, 4), Mode::Async).leader == 2);
    CHECK(merge(cluster({1}, 1, 0), cluster({2}, 2, -1), Mode::Async).leader == 1);
}

TEST_CASE("scripted flips") {
    ScriptedFlipSource flips({{1, "HT"}});
    CHECK(flips.flip(1));
    CHECK_FALSE(flips.flip(1));
    CHECK_THROWS_AS(flips.flip(1), FlipStreamExhausted);
    CHECK_THROWS_AS(flips.flip(2), FlipStreamExhausted);
}

TEST_CASE("two-robot hand trace") {
    const SimConfig config = pair_config(1.26 * 1.26);
    ScriptedFlipSource flips({{1, "HH"}, {2, "TT"}});
    FixedDelaySource delays({});
    const TrialResult r = run_trial(config, flips, delays);
    REQUIRE(r.success);
    CHECK(r.rendezvous_position == doctest::Approx(1.5876));
    CHECK(r.per_robot_distance[0] == doctest::Approx(1 + 2.26 + 2.8476));
    CHECK(r.per_robot_distance[1] == doctest::Approx(6.1076));
    CHECK(r.rnd_total == 1);
    CHECK(r.rnd_first == 1);
    REQUIRE(r.merges.size() == 1);
    CHECK(r.merges[0].surviving_leader == 1);
    CHECK(r.merges[0].absorbed_members == std::vector<RobotId>{2});
}

TEST_CASE("identical coins never meet in sync mode") {
    SimConfig config = pair_config(4.0);
    config.max_rounds = 30;
    std::string same(40, 'H');
    for (std::size_t i = 0; i < same.size(); i += 3) same[i] = 'T';
    ScriptedFlipSource flips({{1, same}, {2, same}});
    FixedDelaySource delays({});
    const TrialResult r = run_trial(config, flips, delays);
    CHECK_FALSE(r.success);
    CHECK(std::isinf(r.rendezvous_time));
    CHECK(r.merges.empty());
}

TEST_CASE("tandem robots merge exactly once per heads/tails boundary") {
    // All robots agree until round i = ceil(alpha), then HHHHTTTT: the
    // merged cluster sweeps right through robots 5..8 within round i.
    SimConfig config;
    config.n = 8;
    config.d = 10.0;
    config.r = 1.26;
    const int i = static_cast<int>(std::ceil(derive_params(config).alpha));
    std::map<RobotId, std::string> scripts;
    for (RobotId j = 1; j <= 8; ++j) {
        std::string s(i, 'H');
        s += j <= 4 ? 'H' : 'T';
        for (int extra = 0; extra < 60; ++extra) s += (extra * 7 + j * 3) % 5 < 2 ? 'H' : 'T';
        scripts[j] = s;
    }
    ScriptedFlipSource flips(scripts);
    FixedDelaySource delays({});
    const TrialResult r = run_trial(config, flips, delays);
    REQUIRE_FALSE(r.merges.empty());
    CHECK(r.rnd_first == i);
    const auto in_round = std::count_if(r.merges.begin(), r.merges.end(),
                                        [&](const MergeEvent& m) { return m.round == i; });
    CHECK(in_round == 4);
    const auto& m = r.merges;
    CHECK(std::all_of(m.begin(), m.begin() + 4, [](const MergeEvent& e) {
        return e.surviving_leader == 4;
    }));
}

TEST_CASE("sync leaders start each round together") {
    SimConfig config;
    config.n = 6;
    config.d = 8.0;
    config.seed = 17;
    RngFlipSource flips(config.seed);
    FixedDelaySource delays({});
    const TrialRun run = simulate(config, flips, delays, TrialOptions{true});
    REQUIRE(run.result.success);
    std::map<int, std::vector<double>> starts;
    for (const TimelineEntry& e : run.timeline) {
        if (e.kind == EventKind::RoundStart) starts[e.round].push_back(e.time);
    }
    REQUIRE_FALSE(starts.empty());
    for (const auto& [round, times] : starts) {
        const auto [lo, hi] = std::minmax_element(times.begin(), times.end());
        CHECK(*hi - *lo <= 1e-9 * std::max(1.0, *hi));
    }
}

TEST_CASE("async robot can be caught before it starts") {
    SimConfig config = pair_config(2.0, Mode::Async);
    ScriptedFlipSource flips({{1, "HHHHHH"}, {2, "HHHHHH"}});
    FixedDelaySource delays({1.0, 100.0});
    const TrialResult r = run_trial(config, flips, delays);
    REQUIRE(r.success);
    CHECK(r.rendezvous_time < 100.0);
    CHECK(r.rendezvous_position == doctest::Approx(4.0));
    CHECK(r.per_robot_distance[1] == 0.0);
    CHECK(r.merges[0].surviving_leader == 1);
}

TEST_CASE("random trials are deterministic and respect distance bounds") {
    for (Mode mode : {Mode::Sync, Mode::Async}) {
        for (std::uint64_t seed = 1; seed <= 40; ++seed) {
            SimConfig config;
            config.n = 7;
            config.d = 5.0;
            config.mode = mode;
            config.seed = seed;
            const TrialResult a = run_trial(config);
            const TrialResult b = run_trial(config);
            CHECK(a.per_robot_distance == b.per_robot_distance);
            CHECK(a.rendezvous_time == b.rendezvous_time);
            REQUIRE(a.success);
            CHECK(a.merges.size() == static_cast<std::size_t>(config.n - 1));
            for (RobotId j = 1; j <= config.n; ++j) {
                const double dist = a.per_robot_distance[j - 1];
                CHECK(dist >= std::abs(config.home(j) - a.rendezvous_position) - 1e-9);
            }
            CHECK(a.per_robot_distance.front() + a.per_robot_distance.back() >=
                  config.home(config.n) - 1e-9);
            CHECK(a.rnd_first <= a.rnd_total);
        }
    }
}

TEST_CASE("noisy and epsilon trials run") {
    SimConfig config;
    config.n = 5;
    config.d = 6.0;
    config.mode = Mode::Async;
    config.noise = GaussianNoise{};
    config.seed = 3;
    CHECK(run_trial(config).success);
    config.noise.reset();
    config.mode = Mode::Sync;
    config.epsilon_mode = EpsilonMode::PerRobotUniform;
    CHECK(run_trial(config).success);
}

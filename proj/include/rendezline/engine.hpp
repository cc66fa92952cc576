#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rendezline/model.hpp"

namespace rendezline {

/// Coin oracle: one unbounded stream per robot. true means heads.
class FlipSource {
public:
    virtual ~FlipSource() = default;
    virtual bool flip(RobotId robot) = 0;
};

/// Start-delay oracle for Async mode.
class DelaySource {
public:
    virtual ~DelaySource() = default;
    virtual double delay(RobotId robot) = 0;
};

/// Default coin: per-robot generator seeded from stream_seed(seed, robot, Flips).
class RngFlipSource final : public FlipSource {
public:
    explicit RngFlipSource(std::uint64_t trial_seed) : seed_(trial_seed) {}
    bool flip(RobotId robot) override;

private:
    std::uint64_t seed_;
    std::map<RobotId, std::mt19937_64> streams_;
};

class FlipStreamExhausted : public std::runtime_error {
public:
    explicit FlipStreamExhausted(RobotId robot);
    RobotId robot() const { return robot_; }

private:
    RobotId robot_;
};

/// Explicit per-robot H/T strings. Reading past the end of a string throws
/// FlipStreamExhausted rather than falling back to a generator.
class ScriptedFlipSource final : public FlipSource {
public:
    ScriptedFlipSource() = default;
    explicit ScriptedFlipSource(std::map<RobotId, std::string> scripts);

    void set(RobotId robot, std::string_view script);
    bool flip(RobotId robot) override;

private:
    std::map<RobotId, std::string> scripts_;
    std::map<RobotId, std::size_t> cursor_;
};

/// Integer delays drawn uniformly from {1, ..., ceil((n-1)*2d) - 1}.
class RngDelaySource final : public DelaySource {
public:
    RngDelaySource(std::uint64_t trial_seed, double delay_bound);
    double delay(RobotId robot) override;

private:
    std::uint64_t seed_;
    int upper_;
};

class FixedDelaySource final : public DelaySource {
public:
    explicit FixedDelaySource(std::vector<double> delays) : delays_(std::move(delays)) {}
    double delay(RobotId robot) override;

private:
    std::vector<double> delays_;  // index j-1
};

/// One piece of a piecewise-linear trajectory. Moving legs run at unit speed;
/// waiting legs have x0 == x1.
struct Leg {
    double t0 = 0.0;
    double x0 = 0.0;
    double t1 = 0.0;
    double x1 = 0.0;

    double velocity() const { return x1 > x0 ? 1.0 : (x1 < x0 ? -1.0 : 0.0); }
    double position_at(double t) const;
};

struct MeetingPoint {
    double time = 0.0;
    double position = 0.0;
};

/// Earliest t in [from, horizon] at which the two legs coincide. Touching
/// (coinciding endpoints, or reaching a stationary leg) counts. Requires
/// left.position_at(from) <= right.position_at(from) up to rounding.
std::optional<MeetingPoint> next_meeting(const Leg& left, const Leg& right, double from,
                                         double horizon);

/// Combines two co-located clusters. Sync: the smaller leader id survives.
/// Async: the leader in the strictly larger round survives, falling back to
/// the smaller leader id on equal rounds. The result keeps the survivor's
/// round, phase, direction, target and home, with the union of members.
Cluster merge(const Cluster& left, const Cluster& right, Mode mode);

enum class EventKind { Meeting, PhaseArrival, WaitExpiry, DelayedStart, RoundStart };

std::string_view to_string(EventKind kind);

/// A processed event, as recorded in a trial timeline.
struct TimelineEntry {
    double time = 0.0;
    EventKind kind = EventKind::RoundStart;
    RobotId leader = 0;
    RobotId other_leader = 0;  // Meeting only
    double position = 0.0;
    int round = 0;
    bool heads = false;  // RoundStart only
    std::vector<RobotId> members;
};

struct TrialOptions {
    bool record_timeline = false;
};

struct TrialRun {
    TrialResult result;
    std::vector<TimelineEntry> timeline;
};

/// Simulates one trial until every robot is in one cluster or a leader would
/// start a round beyond config.round_cap(). Throws FlipStreamExhausted when a
/// scripted flip source runs dry.
TrialRun simulate(const SimConfig& config, FlipSource& flips, DelaySource& delays,
                  const TrialOptions& options = {});

TrialResult run_trial(const SimConfig& config, FlipSource& flips, DelaySource& delays);

/// Uses RngFlipSource and RngDelaySource seeded from config.seed.
TrialResult run_trial(const SimConfig& config);

}  // namespace rendezline

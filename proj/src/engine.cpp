#include "rendezline/engine.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <tuple>

#include "rendezline/itinerary.hpp"
#include "rendezline/random.hpp"

namespace rendezline {

namespace {

constexpr double kRelTol = 1e-9;

double tolerance(double a, double b) {
    return kRelTol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

bool RngFlipSource::flip(RobotId robot) {
    auto it = streams_.find(robot);
    if (it == streams_.end()) {
        it = streams_.emplace(robot, std::mt19937_64(stream_seed(seed_, robot, Stream::Flips))).first;
    }
    return (it->second() >> 63) != 0;
}

FlipStreamExhausted::FlipStreamExhausted(RobotId robot)
    : std::runtime_error("flip string for robot " + std::to_string(robot) + " is exhausted"),
      robot_(robot) {}

ScriptedFlipSource::ScriptedFlipSource(std::map<RobotId, std::string> scripts) {
    for (const auto& [robot, script] : scripts) set(robot, script);
}

void ScriptedFlipSource::set(RobotId robot, std::string_view script) {
    for (char c : script) {
        if (c != 'H' && c != 'T') {
            throw std::invalid_argument("flip strings may only contain H and T");
        }
    }
    scripts_[robot] = std::string(script);
    cursor_[robot] = 0;
}

bool ScriptedFlipSource::flip(RobotId robot) {
    auto it = scripts_.find(robot);
    if (it == scripts_.end()) throw FlipStreamExhausted(robot);
    std::size_t& cursor = cursor_[robot];
    if (cursor >= it->second.size()) throw FlipStreamExhausted(robot);
    return it->second[cursor++] == 'H';
}

RngDelaySource::RngDelaySource(std::uint64_t trial_seed, double delay_bound)
    : seed_(trial_seed), upper_(static_cast<int>(std::ceil(delay_bound)) - 1) {
    if (upper_ < 1) throw std::invalid_argument("delay bound too small for integer delays");
}

double RngDelaySource::delay(RobotId robot) {
    std::mt19937_64 rng(stream_seed(seed_, robot, Stream::Delay));
    std::uniform_int_distribution<int> pick(1, upper_);
    return pick(rng);
}

double FixedDelaySource::delay(RobotId robot) {
    if (robot < 1 || static_cast<std::size_t>(robot) > delays_.size()) {
        throw std::out_of_range("no delay for robot " + std::to_string(robot));
    }
    return delays_[robot - 1];
}

double Leg::position_at(double t) const {
    if (t >= t1) return x1;
    if (t <= t0) return x0;
    const double x = x0 + velocity() * (t - t0);
    return x0 <= x1 ? std::clamp(x, x0, x1) : std::clamp(x, x1, x0);
}

std::optional<MeetingPoint> next_meeting(const Leg& left, const Leg& right, double from,
                                         double horizon) {
    horizon = std::max(horizon, from);
    const double xl = left.position_at(from);
    const double xr = right.position_at(from);
    if (xr - xl <= tolerance(xl, xr)) return MeetingPoint{from, xl};

    const double closing = left.velocity() - right.velocity();
    if (closing > 0.0) {
        const double t = from + (xr - xl) / closing;
        if (t <= horizon) return MeetingPoint{t, left.position_at(t)};
    }
    const double hl = left.position_at(horizon);
    const double hr = right.position_at(horizon);
    if (hr - hl <= tolerance(hl, hr)) return MeetingPoint{horizon, hl};
    return std::nullopt;
}

Cluster merge(const Cluster& left, const Cluster& right, Mode mode) {
    bool left_survives = left.leader < right.leader;
    if (mode == Mode::Async && left.round != right.round) left_survives = left.round > right.round;

    Cluster merged = left_survives ? left : right;
    const Cluster& absorbed = left_survives ? right : left;
    std::vector<RobotId> members;
    members.reserve(merged.members.size() + absorbed.members.size());
    std::merge(merged.members.begin(), merged.members.end(), absorbed.members.begin(),
               absorbed.members.end(), std::back_inserter(members));
    merged.members = std::move(members);
    return merged;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::Meeting: return "meeting";
        case EventKind::PhaseArrival: return "phase_arrival";
        case EventKind::WaitExpiry: return "wait_expiry";
        case EventKind::DelayedStart: return "delayed_start";
        case EventKind::RoundStart: return "round_start";
    }
    return "unknown";
}

namespace {

int priority(EventKind kind) {
    switch (kind) {
        case EventKind::Meeting: return 0;
        case EventKind::RoundStart: return 2;
        default: return 1;
    }
}

// Min-heap key: (time, kind priority, position, sequence). Position orders
// simultaneous meetings left to right.
struct QueuedEvent {
    double time = 0.0;
    int priority = 0;
    double position = 0.0;
    std::uint64_t sequence = 0;
    EventKind kind = EventKind::RoundStart;
    int a = -1;
    int b = -1;
    std::uint64_t version_a = 0;
    std::uint64_t version_b = 0;
};

struct Later {
    bool operator()(const QueuedEvent& x, const QueuedEvent& y) const {
        return std::tie(x.time, x.priority, x.position, x.sequence) >
               std::tie(y.time, y.priority, y.position, y.sequence);
    }
};

struct Slot {
    Cluster cluster;
    Leg leg;
    bool alive = true;
    std::uint64_t version = 0;
    int left = -1;
    int right = -1;
    double odometer = 0.0;  // path length of this slot's trajectory
    bool previous_heads = true;
    double phase_end = 0.0;
    RoundPlan plan;
};

class Simulator {
public:
    Simulator(const SimConfig& config, FlipSource& flips, DelaySource& delays,
              const TrialOptions& options)
        : config_(config), flips_(flips), options_(options), cap_(config.round_cap()) {
        config_.validate();
        const int n = config_.n;
        schedules_.reserve(n);
        for (RobotId j = 1; j <= n; ++j) {
            double epsilon = 0.0;
            if (config_.epsilon_mode == EpsilonMode::PerRobotUniform) {
                std::mt19937_64 rng(stream_seed(config_.seed, j, Stream::Epsilon));
                epsilon = 1.0 - std::uniform_real_distribution<double>(0.0, 1.0)(rng);
            }
            schedules_.emplace_back(config_.r, epsilon, config_.noise,
                                    stream_seed(config_.seed, j, Stream::Noise));
        }

        slots_.resize(n);
        slot_of_.assign(n + 1, 0);
        base_distance_.assign(n + 1, 0.0);
        joined_at_.assign(n + 1, 0.0);
        for (RobotId j = 1; j <= n; ++j) {
            Slot& s = slots_[j - 1];
            const double home = config_.home(j);
            s.cluster.members = {j};
            s.cluster.leader = j;
            s.cluster.home = home;
            s.cluster.position = home;
            s.cluster.current_target = home;
            s.left = j - 2;
            s.right = j < n ? j : -1;
            slot_of_[j] = j - 1;

            double start = 0.0;
            if (config_.mode == Mode::Async) {
                start = delays.delay(j);
                if (!(start >= 0.0)) throw std::invalid_argument("start delays must be non-negative");
                s.cluster.phase = Phase::NotStarted;
            } else {
                s.cluster.phase = Phase::RoundEnd;
            }
            s.leg = Leg{0.0, home, start, home};
        }
        live_ = n;
    }

    TrialRun run() {
        for (int s = 0; s < config_.n; ++s) push_leg_end(s);
        for (int s = 0; s + 1 < config_.n; ++s) push_meeting(s, s + 1);

        while (!done_ && !queue_.empty()) {
            const QueuedEvent ev = queue_.top();
            queue_.pop();
            if (!valid(ev)) continue;
            clock_ = std::max(clock_, ev.time);
            if (ev.kind == EventKind::Meeting) {
                handle_meeting(ev.a, ev.b);
            } else {
                handle_leg_end(ev.a);
            }
        }
        if (!done_) throw std::logic_error("event queue drained before the trial finished");
        return std::move(run_);
    }

private:
    bool sync() const { return config_.mode == Mode::Sync; }

    bool valid(const QueuedEvent& ev) const {
        const Slot& a = slots_[ev.a];
        if (!a.alive || a.version != ev.version_a) return false;
        if (ev.kind != EventKind::Meeting) return true;
        const Slot& b = slots_[ev.b];
        return b.alive && b.version == ev.version_b && a.right == ev.b;
    }

    static EventKind leg_end_kind(Phase phase) {
        switch (phase) {
            case Phase::NotStarted: return EventKind::DelayedStart;
            case Phase::Phase1:
            case Phase::Phase2: return EventKind::PhaseArrival;
            case Phase::Waiting1:
            case Phase::Waiting2: return EventKind::WaitExpiry;
            case Phase::RoundEnd: return EventKind::RoundStart;
        }
        return EventKind::RoundStart;
    }

    void push(QueuedEvent ev) {
        ev.priority = priority(ev.kind);
        ev.sequence = sequence_++;
        queue_.push(ev);
    }

    void push_leg_end(int s) {
        const Slot& slot = slots_[s];
        QueuedEvent ev;
        ev.time = slot.leg.t1;
        ev.kind = leg_end_kind(slot.cluster.phase);
        ev.position = slot.leg.x1;
        ev.a = s;
        ev.version_a = slot.version;
        push(ev);
    }

    void push_meeting(int a, int b) {
        if (a < 0 || b < 0) return;
        const Slot& left = slots_[a];
        const Slot& right = slots_[b];
        const double horizon = std::min(left.leg.t1, right.leg.t1);
        const auto meeting = next_meeting(left.leg, right.leg, clock_, horizon);
        if (!meeting) return;
        QueuedEvent ev;
        ev.time = meeting->time;
        ev.kind = EventKind::Meeting;
        ev.position = meeting->position;
        ev.a = a;
        ev.b = b;
        ev.version_a = left.version;
        ev.version_b = right.version;
        push(ev);
    }

    // Invalidates the slot's pending events and schedules fresh ones.
    void reschedule(int s) {
        Slot& slot = slots_[s];
        ++slot.version;
        push_leg_end(s);
        push_meeting(slot.left, s);
        push_meeting(s, slot.right);
    }

    // Accrues motion up to time t and restarts the current leg from there.
    void split(Slot& slot, double t) {
        const double x = slot.leg.position_at(t);
        slot.odometer += std::abs(x - slot.leg.x0);
        slot.leg.t0 = std::max(slot.leg.t0, t);
        slot.leg.x0 = x;
        slot.cluster.position = x;
    }

    void record(EventKind kind, const Slot& slot, RobotId other = 0) {
        if (!options_.record_timeline) return;
        TimelineEntry e;
        e.time = clock_;
        e.kind = kind;
        e.leader = slot.cluster.leader;
        e.other_leader = other;
        e.position = slot.cluster.position;
        e.round = slot.cluster.round;
        e.heads = slot.plan.heads;
        e.members = slot.cluster.members;
        run_.timeline.push_back(std::move(e));
    }

    void begin_move(int s, double target, double nominal) {
        Slot& slot = slots_[s];
        const double t = clock_;
        const double from = slot.cluster.position;
        double end = t + std::abs(target - from);
        if (sync()) {
            slot.phase_end = t + nominal;
            const double tol = kRelTol * std::max(1.0, slot.phase_end);
            if (end > slot.phase_end + tol) {
                throw std::logic_error("phase travel exceeds its nominal duration");
            }
            if (end > slot.phase_end - tol) end = slot.phase_end;
        }
        slot.cluster.current_target = target;
        slot.cluster.direction =
            target > from ? Direction::Right : (target < from ? Direction::Left : Direction::Still);
        slot.leg = Leg{t, from, end, target};
        reschedule(s);
    }

    void hold_until(int s, double until) {
        Slot& slot = slots_[s];
        slot.cluster.direction = Direction::Still;
        slot.leg = Leg{clock_, slot.cluster.position, until, slot.cluster.position};
        reschedule(s);
    }

    bool must_wait(const Slot& slot) const {
        return sync() && clock_ < slot.phase_end - kRelTol * std::max(1.0, slot.phase_end);
    }

    void begin_phase2(int s) {
        Slot& slot = slots_[s];
        slot.cluster.phase = Phase::Phase2;
        begin_move(s, slot.cluster.home + slot.plan.phase2_target_offset,
                   slot.plan.phase2_nominal_duration);
    }

    void end_round(int s) {
        slots_[s].cluster.phase = Phase::RoundEnd;
        hold_until(s, clock_);
    }

    void start_round(int s) {
        Slot& slot = slots_[s];
        const int next = slot.cluster.round + 1;
        if (next > cap_) {
            finish(false);
            return;
        }
        const RobotId leader = slot.cluster.leader;
        const bool heads = flips_.flip(leader);
        slot.plan = round_plan(schedules_[leader - 1], next, heads, slot.previous_heads);
        slot.previous_heads = heads;
        slot.cluster.round = next;
        record(EventKind::RoundStart, slot);
        slot.cluster.phase = Phase::Phase1;
        begin_move(s, slot.cluster.home + slot.plan.phase1_target_offset,
                   slot.plan.phase1_nominal_duration);
    }

    void handle_leg_end(int s) {
        Slot& slot = slots_[s];
        slot.odometer += std::abs(slot.leg.x1 - slot.leg.x0);
        slot.cluster.position = slot.leg.x1;
        slot.leg = Leg{clock_, slot.leg.x1, clock_, slot.leg.x1};

        switch (slot.cluster.phase) {
            case Phase::NotStarted:
                record(EventKind::DelayedStart, slot);
                slot.cluster.phase = Phase::RoundEnd;
                hold_until(s, clock_);
                break;
            case Phase::Phase1:
                record(EventKind::PhaseArrival, slot);
                if (must_wait(slot)) {
                    slot.cluster.phase = Phase::Waiting1;
                    hold_until(s, slot.phase_end);
                } else {
                    begin_phase2(s);
                }
                break;
            case Phase::Waiting1:
                record(EventKind::WaitExpiry, slot);
                begin_phase2(s);
                break;
            case Phase::Phase2:
                record(EventKind::PhaseArrival, slot);
                if (must_wait(slot)) {
                    slot.cluster.phase = Phase::Waiting2;
                    hold_until(s, slot.phase_end);
                } else {
                    end_round(s);
                }
                break;
            case Phase::Waiting2:
                record(EventKind::WaitExpiry, slot);
                end_round(s);
                break;
            case Phase::RoundEnd:
                start_round(s);
                break;
        }
    }

    void handle_meeting(int a, int b) {
        Slot& left = slots_[a];
        Slot& right = slots_[b];
        split(left, clock_);
        split(right, clock_);

        Cluster merged = merge(left.cluster, right.cluster, config_.mode);
        const bool left_survives = merged.leader == left.cluster.leader;
        const int survivor_index = left_survives ? a : b;
        const int absorbed_index = left_survives ? b : a;
        Slot& survivor = slots_[survivor_index];
        Slot& absorbed = slots_[absorbed_index];

        for (RobotId m : absorbed.cluster.members) {
            base_distance_[m] += absorbed.odometer - joined_at_[m];
            joined_at_[m] = survivor.odometer;
            slot_of_[m] = survivor_index;
        }

        MergeEvent merge_event;
        merge_event.time = clock_;
        merge_event.absorbed_members = absorbed.cluster.members;
        merge_event.surviving_leader = survivor.cluster.leader;
        merge_event.position = survivor.cluster.position;
        merge_event.round = survivor.cluster.round;
        if (run_.result.merges.empty()) run_.result.rnd_first = merge_event.round;
        run_.result.merges.push_back(std::move(merge_event));

        const RobotId absorbed_leader = absorbed.cluster.leader;
        survivor.cluster = std::move(merged);
        absorbed.alive = false;
        if (left_survives) {
            survivor.right = absorbed.right;
            if (absorbed.right >= 0) slots_[absorbed.right].left = survivor_index;
        } else {
            survivor.left = absorbed.left;
            if (absorbed.left >= 0) slots_[absorbed.left].right = survivor_index;
        }
        record(EventKind::Meeting, survivor, absorbed_leader);

        if (--live_ == 1) {
            finish(true);
            return;
        }
        reschedule(survivor_index);
    }

    void finish(bool success) {
        done_ = true;
        TrialResult& result = run_.result;
        result.success = success;
        for (Slot& slot : slots_) {
            if (slot.alive) split(slot, clock_);
        }
        result.per_robot_distance.assign(config_.n, 0.0);
        for (RobotId j = 1; j <= config_.n; ++j) {
            result.per_robot_distance[j - 1] =
                base_distance_[j] + slots_[slot_of_[j]].odometer - joined_at_[j];
        }
        if (success) {
            const Slot& last = slots_[slot_of_[1]];
            result.rendezvous_time = clock_;
            result.rendezvous_position = last.cluster.position;
            result.rnd_total = result.merges.back().round;
        } else {
            result.rendezvous_time = std::numeric_limits<double>::infinity();
            result.rendezvous_position = std::numeric_limits<double>::quiet_NaN();
            result.rnd_total = -1;
        }
    }

    SimConfig config_;
    FlipSource& flips_;
    TrialOptions options_;
    int cap_;
    std::vector<ExpansionSchedule> schedules_;
    std::vector<Slot> slots_;
    std::vector<int> slot_of_;  // robot -> slot
    std::vector<double> base_distance_;
    std::vector<double> joined_at_;  // odometer of the robot's slot when it joined
    std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, Later> queue_;
    std::uint64_t sequence_ = 0;
    double clock_ = 0.0;
    int live_ = 0;
    bool done_ = false;
    TrialRun run_;
};

}  // namespace

TrialRun simulate(const SimConfig& config, FlipSource& flips, DelaySource& delays,
                  const TrialOptions& options) {
    return Simulator(config, flips, delays, options).run();
}

TrialResult run_trial(const SimConfig& config, FlipSource& flips, DelaySource& delays) {
    return simulate(config, flips, delays).result;
}

TrialResult run_trial(const SimConfig& config) {
    RngFlipSource flips(config.seed);
    if (config.mode == Mode::Async) {
        RngDelaySource delays(config.seed, config.delay_bound());
        return run_trial(config, flips, delays);
    }
    FixedDelaySource delays({});
    return run_trial(config, flips, delays);
}

}  // namespace rendezline

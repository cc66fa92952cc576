#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rendezline {

using RobotId = int;  // 1-based, robot j starts at (j-1)*2d

enum class Mode { Sync, Async };
enum class EpsilonMode { Off, PerRobotUniform };

std::string_view to_string(Mode mode);
Mode parse_mode(std::string_view text);

struct GaussianNoise {
    double mu = -1.843;
    double sigma = 0.372;
};

/// (k, delta) decomposition of d = r^(k+delta) plus the analysis round
/// thresholds alpha and alpha*. Logarithms are base 2.
struct DerivedParams {
    int k = 0;
    double delta = 0.0;
    double alpha = 0.0;
    double alpha_star = 0.0;
};

struct SimConfig {
    int n = 2;
    double d = 10.0;
    double r = 1.26;
    Mode mode = Mode::Sync;
    EpsilonMode epsilon_mode = EpsilonMode::Off;
    std::optional<GaussianNoise> noise;
    std::uint64_t seed = 0;
    int max_rounds = 0;  // 0 means default_max_rounds()

    /// Exclusive upper end of the Async start-delay interval, (n-1)*2d.
    double delay_bound() const { return (n - 1) * 2.0 * d; }

    /// Initial position of robot j.
    double home(RobotId j) const { return (j - 1) * 2.0 * d; }

    /// ceil(k/2 + 3 log2 n) + 40.
    int default_max_rounds() const;

    /// max_rounds with the default applied.
    int round_cap() const;

    /// Throws std::invalid_argument on the first violated invariant.
    void validate() const;
};

/// Rejects r <= 1 and d <= r.
DerivedParams derive_params(double d, double r, int n);
DerivedParams derive_params(const SimConfig& config);

enum class Phase { NotStarted, Phase1, Waiting1, Phase2, Waiting2, RoundEnd };

enum class Direction { Left, Right, Still };

/// A set of co-located robots moving under one leader's itinerary.
struct Cluster {
    std::vector<RobotId> members;  // sorted ascending
    RobotId leader = 0;
    double home = 0.0;  // leader's initial location
    double position = 0.0;
    int round = -1;  // -1 before the leader has started
    Phase phase = Phase::NotStarted;
    Direction direction = Direction::Still;
    double current_target = 0.0;
};

struct MergeEvent {
    double time = 0.0;
    std::vector<RobotId> absorbed_members;
    RobotId surviving_leader = 0;
    double position = 0.0;
    int round = 0;
};

struct TrialResult {
    bool success = false;
    double rendezvous_time = 0.0;  // +inf when unsuccessful
    double rendezvous_position = 0.0;
    int rnd_total = -1;
    int rnd_first = -1;
    std::vector<double> per_robot_distance;  // index j-1 for robot j
    std::vector<MergeEvent> merges;
};

}  // namespace rendezline

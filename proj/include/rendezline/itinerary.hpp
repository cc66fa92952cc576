#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <vector>

#include "rendezline/model.hpp"

namespace rendezline {

/// The expansion sequence f(-1), f(0), f(1), ... of one robot.
///
/// f(-1) = 0 and f(i) = r^(i + epsilon) for i >= 0. With noise enabled,
/// f(i) = max(0, r^(i + epsilon) + N(mu, sigma)); samples are drawn in index
/// order from the schedule's own generator and cached, so every query of the
/// same index returns the same value regardless of query order.
class ExpansionSchedule {
public:
    explicit ExpansionSchedule(double r, double epsilon = 0.0,
                               std::optional<GaussianNoise> noise = std::nullopt,
                               std::uint64_t noise_seed = 0);

    double r() const { return r_; }
    double epsilon() const { return epsilon_; }
    bool noisy() const { return noise_.has_value(); }

    /// Throws std::invalid_argument for i < -1.
    double f(int i) const;

    /// f evaluated as if epsilon were 1 (when epsilon mode is on) and
    /// without noise. Sync waiting times are derived from it.
    double nominal_f(int i) const;

private:
    double r_;
    double epsilon_;
    std::optional<GaussianNoise> noise_;
    mutable std::mt19937_64 rng_;
    mutable std::normal_distribution<double> gauss_;  // holds the spare of each generated pair
    mutable std::vector<double> noise_samples_;
};

/// Waypoints of one round relative to the leader's home.
struct RoundPlan {
    int round = 0;
    bool heads = true;
    double start_offset = 0.0;
    double phase1_target_offset = 0.0;
    double phase2_target_offset = 0.0;
    double phase1_nominal_duration = 0.0;
    double phase2_nominal_duration = 0.0;
};

/// Heads: right to +f(2i), then left to -f(2i+1). Tails mirrors it. The
/// start offset is where the previous round ended: -f(2i-1) after heads,
/// +f(2i-1) after tails (zero for round 0).
RoundPlan round_plan(const ExpansionSchedule& schedule, int i, bool heads,
                     bool previous_heads = true);

/// Path length of a round in which the robot meets nobody:
/// f(2i+1) + 2f(2i) + f(2i-1) when the coin repeats the previous outcome,
/// f(2i+1) + 2f(2i) - f(2i-1) when it alternates.
double unsuccessful_round_distance(const ExpansionSchedule& schedule, int i,
                                   bool same_direction_as_previous);

}  // namespace rendezline

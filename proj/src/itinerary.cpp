#include "rendezline/itinerary.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rendezline {

ExpansionSchedule::ExpansionSchedule(double r, double epsilon, std::optional<GaussianNoise> noise,
                                     std::uint64_t noise_seed)
    : r_(r), epsilon_(epsilon), noise_(noise), rng_(noise_seed) {
    if (!(r > 1.0)) throw std::invalid_argument("expansion radius must exceed 1");
    if (epsilon < 0.0 || epsilon > 1.0) throw std::invalid_argument("epsilon must lie in [0, 1]");
    if (noise_ && !(noise_->sigma > 0.0)) throw std::invalid_argument("noise sigma must be positive");
    if (noise_) gauss_ = std::normal_distribution<double>(noise_->mu, noise_->sigma);
}

double ExpansionSchedule::f(int i) const {
    if (i < -1) throw std::invalid_argument("expansion index must be >= -1");
    if (i == -1) return 0.0;
    const double base = std::pow(r_, i + epsilon_);
    if (!noise_) return base;

    const auto index = static_cast<std::size_t>(i);
    while (noise_samples_.size() <= index) noise_samples_.push_back(gauss_(rng_));
    return std::max(0.0, base + noise_samples_[index]);
}

double ExpansionSchedule::nominal_f(int i) const {
    if (i < -1) throw std::invalid_argument("expansion index must be >= -1");
    if (i == -1) return 0.0;
    return std::pow(r_, i + (epsilon_ > 0.0 ? 1.0 : 0.0));
}

RoundPlan round_plan(const ExpansionSchedule& schedule, int i, bool heads, bool previous_heads) {
    if (i < 0) throw std::invalid_argument("round index must be non-negative");
    const double sign = heads ? 1.0 : -1.0;
    const double previous_sign = previous_heads ? 1.0 : -1.0;

    RoundPlan plan;
    plan.round = i;
    plan.heads = heads;
    plan.start_offset = i == 0 ? 0.0 : -previous_sign * schedule.f(2 * i - 1);
    plan.phase1_target_offset = sign * schedule.f(2 * i);
    plan.phase2_target_offset = -sign * schedule.f(2 * i + 1);
    plan.phase1_nominal_duration = schedule.nominal_f(2 * i) + schedule.nominal_f(2 * i - 1);
    plan.phase2_nominal_duration = schedule.nominal_f(2 * i + 1) + schedule.nominal_f(2 * i);
    return plan;
}

double unsuccessful_round_distance(const ExpansionSchedule& schedule, int i,
                                   bool same_direction_as_previous) {
    if (i < 0) throw std::invalid_argument("round index must be non-negative");
    const double core = schedule.f(2 * i + 1) + 2.0 * schedule.f(2 * i);
    const double previous = schedule.f(2 * i - 1);
    return same_direction_as_previous ? core + previous : core - previous;
}

}  // namespace rendezline

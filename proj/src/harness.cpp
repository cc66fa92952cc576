#include "rendezline/harness.hpp"

#include <atomic>
#include <bit>
#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

#include "rendezline/engine.hpp"
#include "rendezline/random.hpp"

namespace rendezline {

std::string_view to_string(SweepMode mode) {
    switch (mode) {
        case SweepMode::Sync: return "sync";
        case SweepMode::Async: return "async";
        case SweepMode::AsyncNoise: return "async-noise";
    }
    return "unknown";
}

SweepMode parse_sweep_mode(std::string_view text) {
    if (text == "sync") return SweepMode::Sync;
    if (text == "async") return SweepMode::Async;
    if (text == "async-noise") return SweepMode::AsyncNoise;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

void SweepSpec::validate() const {
    if (trials_per_cell < 1) throw std::invalid_argument("trials per cell must be at least 1");
    if (jobs < 0) throw std::invalid_argument("jobs must be non-negative");
    if (n_values.empty() || d_values.empty() || r_values.empty() || modes.empty()) {
        throw std::invalid_argument("sweep needs at least one value of n, d, r and mode");
    }
    for (SweepMode mode : modes) {
        for (int n : n_values) {
            for (double d : d_values) {
                for (double r : r_values) make_config(Cell{mode, n, d, r}, *this, 0).validate();
            }
        }
    }
}

std::uint64_t trial_seed(std::uint64_t base_seed, int n, double d, double r, int trial) {
    std::uint64_t h = splitmix64(static_cast<std::uint64_t>(n));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(d));
    h = splitmix64(h ^ std::bit_cast<std::uint64_t>(r));
    h = splitmix64(h ^ static_cast<std::uint64_t>(trial));
    return base_seed ^ h;
}

SimConfig make_config(const Cell& cell, const SweepSpec& spec, int trial) {
    SimConfig config;
    config.n = cell.n;
    config.d = cell.d;
    config.r = cell.r;
    config.mode = cell.mode == SweepMode::Sync ? Mode::Sync : Mode::Async;
    config.epsilon_mode = spec.epsilon_mode;
    if (cell.mode == SweepMode::AsyncNoise) config.noise = spec.noise;
    config.seed = trial_seed(spec.base_seed, cell.n, cell.d, cell.r, trial);
    return config;
}

namespace {

struct TrialSummary {
    bool success = false;
    double distance = 0.0;  // per-robot mean
    double rounds = 0.0;
    double gap = 0.0;
    double time = 0.0;
};

TrialSummary summarize(const TrialResult& result) {
    TrialSummary s;
    s.success = result.success;
    if (!result.success) return s;
    double total = 0.0;
    for (double x : result.per_robot_distance) total += x;
    s.distance = total / static_cast<double>(result.per_robot_distance.size());
    s.rounds = result.rnd_total;
    s.gap = result.rnd_total - result.rnd_first;
    s.time = result.rendezvous_time;
    return s;
}

struct Moments {
    double sum = 0.0;
    double sum_sq = 0.0;

    void add(double x) {
        sum += x;
        sum_sq += x * x;
    }
    double mean(int count) const { return sum / count; }
    double standard_error(int count) const {
        if (count < 2) return 0.0;
        const double m = mean(count);
        const double var = std::max(0.0, (sum_sq - count * m * m) / (count - 1));
        return std::sqrt(var / count);
    }
};

}  // namespace

AggregateStats run_cell(const Cell& cell, const SweepSpec& spec) {
    const int trials = spec.trials_per_cell;
    std::vector<TrialSummary> summaries(trials);

    auto work = [&](std::atomic<int>& next) {
        for (int t = next++; t < trials; t = next++) {
            summaries[t] = summarize(run_trial(make_config(cell, spec, t)));
        }
    };

    std::atomic<int> next{0};
    int jobs = spec.jobs > 0 ? spec.jobs : static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::clamp(jobs, 1, trials);
    if (jobs == 1) {
        work(next);
    } else {
        std::vector<std::jthread> workers;
        workers.reserve(jobs);
        for (int w = 0; w < jobs; ++w) workers.emplace_back([&] { work(next); });
    }

    // Fixed-order fold keeps the result independent of the worker count.
    AggregateStats stats;
    stats.trials = trials;
    Moments distance, rounds, gap, time;
    int ok = 0;
    for (const TrialSummary& s : summaries) {
        if (!s.success) {
            ++stats.failure_count;
            continue;
        }
        ++ok;
        distance.add(s.distance);
        rounds.add(s.rounds);
        gap.add(s.gap);
        time.add(s.time);
    }
    stats.aborted = 2 * stats.failure_count > trials;
    if (ok == 0 || stats.aborted) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        stats.mean_distance = stats.mean_total_distance = stats.distance_ratio = nan;
        stats.mean_rounds = stats.mean_first_to_total_gap = stats.mean_time = nan;
        return stats;
    }
    const double optimal = (cell.n - 1) * cell.d;
    stats.mean_distance = distance.mean(ok);
    stats.mean_total_distance = stats.mean_distance * cell.n;
    stats.distance_ratio = stats.mean_distance / optimal;
    stats.mean_rounds = rounds.mean(ok);
    stats.mean_first_to_total_gap = gap.mean(ok);
    stats.mean_time = time.mean(ok);
    stats.stderr_distance = distance.standard_error(ok);
    stats.stderr_ratio = stats.stderr_distance / optimal;
    stats.stderr_rounds = rounds.standard_error(ok);
    stats.stderr_gap = gap.standard_error(ok);
    stats.stderr_time = time.standard_error(ok);
    return stats;
}

std::vector<CellResult> run_sweep(const SweepSpec& spec) {
    spec.validate();
    std::vector<CellResult> results;
    for (SweepMode mode : spec.modes) {
        for (int n : spec.n_values) {
            for (double d : spec.d_values) {
                for (double r : spec.r_values) {
                    const Cell cell{mode, n, d, r};
                    results.push_back({cell, run_cell(cell, spec)});
                }
            }
        }
    }
    return results;
}

RoundDiagnostics rounds_vs_prediction(const AggregateStats& stats, const DerivedParams& derived,
                                      int n) {
    const double lg = std::log2(static_cast<double>(n));
    const double half_k = derived.k / 2.0;
    RoundDiagnostics diag;
    diag.rounds_delta = stats.mean_rounds - (half_k + 2.0 * lg);
    diag.stage3_onset_delta = stats.mean_rounds - (half_k + 2.5 * lg);
    diag.gap_delta = stats.mean_first_to_total_gap - 1.5 * lg;
    return diag;
}

bool ModeComparison::sync_faster() const {
    return sync && async && sync->mean_time < async->mean_time;
}

bool ModeComparison::async_ratio_higher() const {
    return sync && async && async->distance_ratio > sync->distance_ratio;
}

double ModeComparison::noise_relative_change() const {
    if (!async || !async_noise) return std::numeric_limits<double>::quiet_NaN();
    return (async_noise->mean_distance - async->mean_distance) / async->mean_distance;
}

std::vector<ModeComparison> compare_modes(const std::vector<CellResult>& results) {
    std::vector<ModeComparison> table;
    for (const CellResult& row : results) {
        auto it = std::find_if(table.begin(), table.end(), [&](const ModeComparison& c) {
            return c.n == row.cell.n && c.d == row.cell.d && c.r == row.cell.r;
        });
        if (it == table.end()) {
            table.push_back(ModeComparison{row.cell.n, row.cell.d, row.cell.r, {}, {}, {}});
            it = std::prev(table.end());
        }
        switch (row.cell.mode) {
            case SweepMode::Sync: it->sync = row.stats; break;
            case SweepMode::Async: it->async = row.stats; break;
            case SweepMode::AsyncNoise: it->async_noise = row.stats; break;
        }
    }
    return table;
}

}  // namespace rendezline

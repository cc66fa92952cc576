#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "rendezline/model.hpp"

namespace rendezline {

/// Experiment family. AsyncNoise is Async with Gaussian odometry error.
enum class SweepMode { Sync, Async, AsyncNoise };

std::string_view to_string(SweepMode mode);
SweepMode parse_sweep_mode(std::string_view text);

struct SweepSpec {
    std::vector<int> n_values;
    std::vector<double> d_values;
    std::vector<double> r_values;
    std::vector<SweepMode> modes{SweepMode::Sync};
    EpsilonMode epsilon_mode = EpsilonMode::Off;
    GaussianNoise noise;  // used by AsyncNoise cells
    int trials_per_cell = 1000;
    std::uint64_t base_seed = 0;
    int jobs = 0;  // 0: hardware concurrency; 1: run in the calling thread

    void validate() const;
};

struct Cell {
    SweepMode mode = SweepMode::Sync;
    int n = 0;
    double d = 0.0;
    double r = 0.0;
};

/// Means are over successful trials only; failed trials are counted apart.
struct AggregateStats {
    int trials = 0;
    int failure_count = 0;
    bool aborted = false;  // more than half the trials failed
    double mean_distance = 0.0;        // per robot
    double mean_total_distance = 0.0;  // summed over robots
    double distance_ratio = 0.0;       // mean_distance / ((n-1) d)
    double mean_rounds = 0.0;
    double mean_first_to_total_gap = 0.0;
    double mean_time = 0.0;
    double stderr_distance = 0.0;
    double stderr_ratio = 0.0;
    double stderr_rounds = 0.0;
    double stderr_gap = 0.0;
    double stderr_time = 0.0;
};

struct CellResult {
    Cell cell;
    AggregateStats stats;
};

/// Seed of one trial. Depends on the cell's values (not its position in the
/// sweep) and not on the mode, so the modes of a cell share coin and delay
/// streams.
std::uint64_t trial_seed(std::uint64_t base_seed, int n, double d, double r, int trial);

SimConfig make_config(const Cell& cell, const SweepSpec& spec, int trial);

AggregateStats run_cell(const Cell& cell, const SweepSpec& spec);

/// Cells in mode-major, then n, d, r order.
std::vector<CellResult> run_sweep(const SweepSpec& spec);

struct RoundDiagnostics {
    double rounds_delta = 0.0;        // mean_rounds - (k/2 + 2 log2 n)
    double stage3_onset_delta = 0.0;  // mean_rounds - (k/2 + 2.5 log2 n)
    double gap_delta = 0.0;           // gap - 1.5 log2 n
};

RoundDiagnostics rounds_vs_prediction(const AggregateStats& stats, const DerivedParams& derived,
                                      int n);

struct ModeComparison {
    int n = 0;
    double d = 0.0;
    double r = 0.0;
    std::optional<AggregateStats> sync;
    std::optional<AggregateStats> async;
    std::optional<AggregateStats> async_noise;

    bool sync_faster() const;             // sync mean_time < async mean_time
    bool async_ratio_higher() const;      // async distance_ratio > sync distance_ratio
    double noise_relative_change() const; // (noise - async) / async mean_distance
};

/// Groups results by (n, d, r) across modes.
std::vector<ModeComparison> compare_modes(const std::vector<CellResult>& results);

}  // namespace rendezline

#pragma once

#include "rendezline/model.hpp"

namespace rendezline::analysis {

/// Cluster-count state of one round, as used by the merging lemmas.
struct AnalysisParams {
    int n = 0;
    int k = 0;
    double r = 1.26;
    double d = 0.0;
    int c_star = 0;    // clusters at the start of the round
    int k_star = 0;    // heads among the leaders' flips
    int c_star_u = 0;  // floor(c_star / 2)
    double alpha = 0.0;
    double alpha_star = 0.0;

    /// Throws std::invalid_argument unless 1 <= k_star <= c_star.
    static AnalysisParams make(int n, int k, double r, double d, int c_star, int k_star);
};

/// Joint direction state of adjacent clusters C_j, C_{j+1} at the instant
/// C_j reaches C_{j+1}'s initial location.
enum class MeetEvent { E1, E2, E3, E4 };

struct AsyncMeetQuery {
    int i_star = 0;  // round of C_j
    int j_star = 0;  // round of C_{j+1}
    int delta = 0;   // |i_star - j_star|
    MeetEvent event = MeetEvent::E1;

    static AsyncMeetQuery make(int i_star, int j_star, MeetEvent event);
};

struct StageBounds {
    double stage1 = 0.0;
    double stage2 = 0.0;
    double stage3 = 0.0;

    double total() const { return stage1 + stage2 + stage3; }
};

/// C(c_star, k_star) / 2^c_star for 0 <= k_star <= c_star <= 64.
double binom_heads_prob(int c_star, int k_star);

/// Probability of the event H_i: X in {floor(c/2)-1, ceil(c/2), ceil(c/2)+1}
/// for even c, additionally floor(c/2) for odd c. Requires c_star >= 4.
double heads_event_prob(int c_star);

/// (n - c_star + k_star) * 2d.
double max_cluster_distance(int n, int c_star, int k_star, double d);

/// r^(2i) >= max_cluster_distance / 2.
bool lemma1_reach_predicate(const AnalysisParams& params, int i);

/// Heads count with which the reach condition is evaluated: k_star itself,
/// or c_star - k_star when more than half the flips are heads.
int effective_heads(int c_star, int k_star);

/// min(1, (i - alpha)^L / (2^(i - alpha) * Gamma(L + 1))), L = log2 n.
double tail_bound_Ri(int n, double alpha, double i);

/// Gamma(log2 n + 1), the continuation of (log n)!.
double log_factorial(int n);

/// Per-stage expected-distance bounds of the synchronous algorithm.
/// Requires 1 < r < sqrt(2).
StageBounds stage_bounds_sync(int n, int k, double r);

/// Asynchronous counterpart: exponents 1.84, 2.5, 1.34 and r^(k+6).
StageBounds stage_bounds_async(int n, int k, double r);

/// Sum of the stage bounds with r^k replaced by d (delta = 0), divided by
/// (n-1)d. The result does not depend on d.
double competitive_ratio_bound(Mode mode, int n, double d, double r);

/// Truth value of the meeting inequality matching query.event:
///   E1: r^(2j*)   >= maxdist + r^(2(j*-delta)-1)
///   E2: r^(2i*+1) >= maxdist + r^(2(i*-delta))
///   E3: r^(2i*)   >= maxdist + r^(2(i*-delta))
///   E4: r^(2i*+1) >= maxdist + r^(2(i*-delta)+2)
/// where maxdist = max_cluster_distance(n, c_star, c_star_u, d).
bool async_meet_predicate(const AsyncMeetQuery& query, const AnalysisParams& params);

struct LemmaGridCounts {
    int reach_checked = 0;
    int reach_failed = 0;
    int meet_checked = 0;
    int meet_failed = 0;
};

/// Evaluates the reach predicate at round ceil(alpha) for every admissible
/// (c_star, k_star), and E1..E4 at round ceil(alpha_star) for round gaps up
/// to max_gap, with d = r^(k+1).
LemmaGridCounts lemma_grid_counts(int n, int k, double r, int max_gap = 6);

/// T(n) = T(ceil(n/2)) + 1, T(1) = 0.
int min_rounds_recurrence(int n);

}  // namespace rendezline::analysis

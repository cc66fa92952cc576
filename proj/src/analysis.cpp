#include "rendezline/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

namespace rendezline::analysis {

AnalysisParams AnalysisParams::make(int n, int k, double r, double d, int c_star, int k_star) {
    if (n < 1 || c_star < 1 || c_star > n) throw std::invalid_argument("need 1 <= c_star <= n");
    if (k_star < 1 || k_star > c_star) throw std::invalid_argument("need 1 <= k_star <= c_star");
    if (k < 1) throw std::invalid_argument("k must be positive");
    AnalysisParams p;
    p.n = n;
    p.k = k;
    p.r = r;
    p.d = d;
    p.c_star = c_star;
    p.k_star = k_star;
    p.c_star_u = c_star / 2;
    const double lg = std::log2(static_cast<double>(n));
    p.alpha = k / 2.0 + 1.5 * lg;
    p.alpha_star = k / 2.0 + 2.75 * lg + 3.0;
    return p;
}

AsyncMeetQuery AsyncMeetQuery::make(int i_star, int j_star, MeetEvent event) {
    AsyncMeetQuery q;
    q.i_star = i_star;
    q.j_star = j_star;
    q.delta = std::abs(i_star - j_star);
    q.event = event;
    return q;
}

double binom_heads_prob(int c_star, int k_star) {
    if (c_star < 0 || c_star > 64) throw std::invalid_argument("c_star must lie in [0, 64]");
    if (k_star < 0 || k_star > c_star) throw std::invalid_argument("k_star must lie in [0, c_star]");
    // C(64, 32) < 2^61, so the multiplicative recurrence is exact in 128 bits.
    const int m = std::min(k_star, c_star - k_star);
    __extension__ using wide = unsigned __int128;
    wide c = 1;
    for (int j = 1; j <= m; ++j) c = c * static_cast<unsigned>(c_star - m + j) / static_cast<unsigned>(j);
    return std::ldexp(static_cast<double>(static_cast<std::uint64_t>(c)), -c_star);
}

double heads_event_prob(int c_star) {
    if (c_star < 4) throw std::invalid_argument("H_i needs c_star >= 4");
    const int lo = c_star / 2;
    const int hi = (c_star + 1) / 2;
    double p = binom_heads_prob(c_star, lo - 1) + binom_heads_prob(c_star, hi);
    if (hi + 1 <= c_star) p += binom_heads_prob(c_star, hi + 1);
    if (c_star % 2 == 1) p += binom_heads_prob(c_star, lo);
    return p;
}

double max_cluster_distance(int n, int c_star, int k_star, double d) {
    return (n - c_star + k_star) * 2.0 * d;
}

int effective_heads(int c_star, int k_star) {
    return k_star <= c_star / 2 ? k_star : c_star - k_star;
}

bool lemma1_reach_predicate(const AnalysisParams& params, int i) {
    if (i < 0) throw std::invalid_argument("round index must be non-negative");
    const int heads = effective_heads(params.c_star, params.k_star);
    const double reach = std::pow(params.r, 2.0 * i);
    return reach >= max_cluster_distance(params.n, params.c_star, heads, params.d) / 2.0;
}

double log_factorial(int n) {
    return std::tgamma(std::log2(static_cast<double>(n)) + 1.0);
}

double tail_bound_Ri(int n, double alpha, double i) {
    if (i < alpha) throw std::invalid_argument("tail bound needs i >= alpha");
    const double x = i - alpha;
    const double lg = std::log2(static_cast<double>(n));
    const double value = std::pow(x, lg) / (std::exp2(x) * log_factorial(n));
    return std::min(1.0, value);
}

namespace {

void require_sub_sqrt2(double r) {
    if (!(r > 1.0)) throw std::invalid_argument("r must exceed 1");
    if (!(r * r < 2.0)) {
        throw std::invalid_argument(
            "r must be below sqrt(2): the stage-3 bound has a pole at 2 - r^2 = 0");
    }
}

// rk stands for r^k in the printed bounds.
StageBounds sync_bounds(int n, double rk, double r) {
    const double nn = n;
    const double head = (r + 2.0) / (r * r - 1.0);
    StageBounds b;
    b.stage1 = head * nn * rk;
    b.stage2 = head * std::pow(nn, 1.67) * rk;
    b.stage3 = 2.0 * std::pow(nn, 0.67) * rk * (r + 2.0) / ((2.0 - r * r) * log_factorial(n));
    return b;
}

StageBounds async_bounds(int n, double rk, double r) {
    const double nn = n;
    const double rk6 = rk * std::pow(r, 6.0);
    const double head = (r + 2.0) / (r * r - 1.0);
    StageBounds b;
    b.stage1 = head * std::pow(nn, 1.84) * rk6;
    b.stage2 = head * std::pow(nn, 2.5) * rk6;
    b.stage3 = 2.0 * std::pow(nn, 1.34) * rk6 * (r + 2.0) / ((2.0 - r * r) * log_factorial(n));
    return b;
}

}  // namespace

StageBounds stage_bounds_sync(int n, int k, double r) {
    require_sub_sqrt2(r);
    return sync_bounds(n, std::pow(r, k), r);
}

StageBounds stage_bounds_async(int n, int k, double r) {
    require_sub_sqrt2(r);
    return async_bounds(n, std::pow(r, k), r);
}

double competitive_ratio_bound(Mode mode, int n, double d, double r) {
    require_sub_sqrt2(r);
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(d > 0.0)) throw std::invalid_argument("d must be positive");
    const StageBounds b = mode == Mode::Sync ? sync_bounds(n, d, r) : async_bounds(n, d, r);
    return b.total() / ((n - 1) * d);
}

bool async_meet_predicate(const AsyncMeetQuery& query, const AnalysisParams& params) {
    const double r = params.r;
    const double maxdist =
        max_cluster_distance(params.n, params.c_star, params.c_star_u, params.d);
    const int i = query.i_star;
    const int j = query.j_star;
    const int delta = query.delta;
    switch (query.event) {
        case MeetEvent::E1:
            return std::pow(r, 2.0 * j) >= maxdist + std::pow(r, 2.0 * (j - delta) - 1.0);
        case MeetEvent::E2:
            return std::pow(r, 2.0 * i + 1.0) >= maxdist + std::pow(r, 2.0 * (i - delta));
        case MeetEvent::E3:
            return std::pow(r, 2.0 * i) >= maxdist + std::pow(r, 2.0 * (i - delta));
        case MeetEvent::E4:
            return std::pow(r, 2.0 * i + 1.0) >= maxdist + std::pow(r, 2.0 * (i - delta) + 2.0);
    }
    return false;
}

LemmaGridCounts lemma_grid_counts(int n, int k, double r, int max_gap) {
    const double d = std::pow(r, k + 1.0);
    const AnalysisParams base = AnalysisParams::make(n, k, r, d, n, 1);
    LemmaGridCounts counts;

    const int i = static_cast<int>(std::ceil(base.alpha));
    const int c_min = std::max(2, static_cast<int>(std::ceil(n / std::exp2(i - base.alpha))));
    for (int c = c_min; c <= n; ++c) {
        for (int h = 1; h <= c / 2; ++h) {
            ++counts.reach_checked;
            if (!lemma1_reach_predicate(AnalysisParams::make(n, k, r, d, c, h), i)) {
                ++counts.reach_failed;
            }
        }
    }

    const int i_star = static_cast<int>(std::ceil(base.alpha_star));
    for (int c = 2; c <= n; ++c) {
        const AnalysisParams p = AnalysisParams::make(n, k, r, d, c, c / 2);
        for (int gap = 0; gap <= max_gap; ++gap) {
            auto check = [&](int j_star, MeetEvent e) {
                ++counts.meet_checked;
                if (!async_meet_predicate(AsyncMeetQuery::make(i_star, j_star, e), p)) {
                    ++counts.meet_failed;
                }
            };
            check(i_star + gap, MeetEvent::E1);
            check(i_star - gap, MeetEvent::E2);
            if (gap >= 1) {
                check(i_star - gap, MeetEvent::E3);
                check(i_star - gap, MeetEvent::E4);
            }
        }
    }
    return counts;
}

int min_rounds_recurrence(int n) {
    if (n < 1) throw std::invalid_argument("n must be positive");
    int rounds = 0;
    while (n > 1) {
        n = (n + 1) / 2;
        ++rounds;
    }
    return rounds;
}

}  // namespace rendezline::analysis

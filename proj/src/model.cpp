#include "rendezline/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rendezline {

std::string_view to_string(Mode mode) {
    return mode == Mode::Sync ? "sync" : "async";
}

Mode parse_mode(std::string_view text) {
    if (text == "sync") return Mode::Sync;
    if (text == "async") return Mode::Async;
    throw std::invalid_argument("unknown mode '" + std::string(text) + "'");
}

int SimConfig::default_max_rounds() const {
    const DerivedParams p = derive_params(d, r, n);
    return static_cast<int>(std::ceil(p.k / 2.0 + 3.0 * std::log2(n))) + 40;
}

int SimConfig::round_cap() const {
    return max_rounds > 0 ? max_rounds : default_max_rounds();
}

void SimConfig::validate() const {
    if (n < 2) throw std::invalid_argument("n must be at least 2");
    if (!(r > 1.0)) throw std::invalid_argument("r must exceed 1");
    if (!(d > r)) throw std::invalid_argument("d must exceed r so that k >= 1");
    if (noise && !(noise->sigma > 0.0)) throw std::invalid_argument("noise sigma must be positive");
    if (noise && mode == Mode::Sync) {
        throw std::invalid_argument("noise is only supported in async mode");
    }
    if (max_rounds < 0) throw std::invalid_argument("max_rounds must be non-negative");
    if (max_rounds > 0) {
        const DerivedParams p = derive_params(d, r, n);
        if (max_rounds < p.k / 2.0 + 3.0 * std::log2(n) + 8.0) {
            throw std::invalid_argument("max_rounds must be at least k/2 + 3 log2(n) + 8");
        }
    }
}

DerivedParams derive_params(double d, double r, int n) {
    if (!(r > 1.0)) throw std::invalid_argument("r must exceed 1");
    if (n < 1) throw std::invalid_argument("n must be positive");
    if (!(d > 0.0)) throw std::invalid_argument("d must be positive");

    const double m = std::log(d) / std::log(r);
    const double nearest = std::round(m);
    DerivedParams p;
    if (std::abs(m - nearest) <= 1e-11 * std::max(1.0, std::abs(m))) {
        // integer exponent: delta = 1 by the half-open convention
        p.k = static_cast<int>(nearest) - 1;
        p.delta = 1.0;
    } else {
        p.k = static_cast<int>(std::ceil(m)) - 1;
        p.delta = m - p.k;
    }
    if (p.k < 1) throw std::invalid_argument("d must exceed r so that k >= 1");

    const double lg = std::log2(static_cast<double>(n));
    p.alpha = p.k / 2.0 + 1.5 * lg;
    p.alpha_star = p.k / 2.0 + 2.75 * lg + 3.0;
    return p;
}

DerivedParams derive_params(const SimConfig& config) {
    return derive_params(config.d, config.r, config.n);
}

}  // namespace rendezline

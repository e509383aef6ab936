#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "switchfolio/core.hpp"
#include "switchfolio/costs.hpp"

namespace testsupport {

using switchfolio::PriceRelativeMatrix;

inline std::vector<std::string> names_for(std::size_t n) {
    std::vector<std::string> names;
    for (std::size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
    return names;
}

inline PriceRelativeMatrix matrix(const std::vector<std::vector<double>>& rows) {
    const std::size_t n = rows.empty() ? 1 : rows.front().size();
    return PriceRelativeMatrix::from_rows(rows, names_for(n));
}

// Entries log-uniform in [lo, hi].
inline PriceRelativeMatrix random_matrix(std::mt19937_64& rng, std::size_t days, std::size_t assets,
                                         double lo = 0.25, double hi = 4.0) {
    std::uniform_real_distribution<double> u(std::log(lo), std::log(hi));
    std::vector<std::vector<double>> rows(days, std::vector<double>(assets));
    for (auto& r : rows)
        for (auto& v : r) v = std::exp(u(rng));
    return PriceRelativeMatrix::from_rows(rows, names_for(assets));
}

inline std::vector<double> random_simplex(std::mt19937_64& rng, std::size_t n) {
    std::exponential_distribution<double> e(1.0);
    std::vector<double> w(n);
    double s = 0.0;
    for (auto& v : w) s += (v = e(rng));
    for (auto& v : w) v /= s;
    return w;
}

inline double rel_diff(double a, double b) {
    return std::abs(a - b) / std::max(std::abs(a), std::abs(b));
}

// Brute-force mixture over per-day asset paths a_1..a_T. A path is a regime:
// a switch happens wherever consecutive days differ. The prior is a Markov
// chain: uniform first asset, then per-transition stay/switch probabilities
// that depend on how long the current asset has been held.
//
// stay(run) gives the probability of staying after `run` completed days on
// the current asset beyond the first (run = 0 right after a switch or day 1).
inline double path_mixture(const PriceRelativeMatrix& x, const std::function<double(std::size_t)>& stay,
                           double switch_factor, bool charge_first = false) {
    const std::size_t T = x.days(), N = x.assets();
    if (T == 0) return 1.0;
    double total = 0.0;
    std::vector<std::size_t> path(T, 0);
    while (true) {
        double p = 1.0 / static_cast<double>(N);
        double w = x(0, path[0]) * (charge_first ? switch_factor : 1.0);
        std::size_t run = 0;
        for (std::size_t t = 1; t < T; ++t) {
            if (path[t] == path[t - 1]) {
                p *= stay(run);
                ++run;
            } else {
                p *= (1.0 - stay(run)) / static_cast<double>(N - 1);
                w *= switch_factor;
                run = 0;
            }
            w *= x(t, path[t]);
        }
        total += p * w;
        std::size_t k = 0;
        while (k < T && ++path[k] == N) path[k++] = 0;
        if (k == T) break;
    }
    return total;
}

inline double path_mixture_fixed(const PriceRelativeMatrix& x, double gamma, double f = 1.0) {
    return path_mixture(x, [gamma](std::size_t) { return 1.0 - gamma; }, f);
}

inline double path_mixture_adaptive(const PriceRelativeMatrix& x, double f = 1.0) {
    return path_mixture(x, [](std::size_t run) { return 1.0 - 0.5 / static_cast<double>(run + 1); }, f);
}

// Final wealth of CRP w with no costs.
inline double crp_wealth(const PriceRelativeMatrix& x, double w1) {
    double s = 1.0;
    for (std::size_t t = 0; t < x.days(); ++t) s *= w1 * x(t, 0) + (1.0 - w1) * x(t, 1);
    return s;
}

inline double crp_log2(const PriceRelativeMatrix& x, double w1) {
    double s = 0.0;
    for (std::size_t t = 0; t < x.days(); ++t) s += std::log2(w1 * x(t, 0) + (1.0 - w1) * x(t, 1));
    return s;
}

// N = 2 grid search with step h over w1 ∈ [0, 1].
inline double grid_best_log2(const PriceRelativeMatrix& x, double h) {
    const auto steps = static_cast<std::size_t>(std::llround(1.0 / h));
    double best = -INFINITY;
    for (std::size_t k = 0; k <= steps; ++k) best = std::max(best, crp_log2(x, static_cast<double>(k) * h));
    return best;
}

// ∫₀¹ S(w) dw by composite Simpson with step h (N = 2, no costs).
inline double universal_quadrature(const PriceRelativeMatrix& x, double h) {
    auto steps = static_cast<std::size_t>(std::llround(1.0 / h));
    if (steps % 2) ++steps;
    const double step = 1.0 / static_cast<double>(steps);
    double sum = crp_wealth(x, 0.0) + crp_wealth(x, 1.0);
    for (std::size_t k = 1; k < steps; ++k)
        sum += (k % 2 ? 4.0 : 2.0) * crp_wealth(x, static_cast<double>(k) * step);
    return sum * step / 3.0;
}

}  // namespace testsupport

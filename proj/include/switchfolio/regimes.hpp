#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "switchfolio/core.hpp"
#include "switchfolio/costs.hpp"

namespace switchfolio {

/// Which prior over switching regimes: geometric durations with a fixed γ, or
/// the adaptive γ̂(Δt) durations.
struct PriorKind {
    enum class Type { fixed_gamma, adaptive };
    Type type = Type::adaptive;
    double gamma = 0.0;

    static PriorKind fixed(double gamma);
    static PriorKind adaptive() { return {}; }
};

/// How commissions enter a regime's wealth: only at the l switches (what the
/// algorithms charge), or once per segment including the initial purchase.
enum class RegimeCharge { switches_only, all_segments };

double prior_fixed(const RegimeSpec& regime, std::size_t days, std::size_t assets, double gamma);
double prior_adaptive(const RegimeSpec& regime, std::size_t days, std::size_t assets);
/// log₂ of the prior probability.
double log2_prior(const RegimeSpec& regime, std::size_t days, std::size_t assets,
                  const PriorKind& prior);

double regime_wealth(const RegimeSpec& regime, const PriceRelativeMatrix& x,
                     const CostModel& cost = {},
                     RegimeCharge charge = RegimeCharge::switches_only);
double log2_regime_wealth(const RegimeSpec& regime, const PriceRelativeMatrix& x,
                          const CostModel& cost = {},
                          RegimeCharge charge = RegimeCharge::switches_only);

inline constexpr double kMaxEnumeratedRegimes = 1e7;

/// Number of regimes over T days with N strategies (N^T).
double count_regimes(std::size_t days, std::size_t assets);

/// Calls `visit` once per valid regime. Throws Error{instance_too_large} above
/// kMaxEnumeratedRegimes. T = 0 yields nothing.
void enumerate_regimes(std::size_t days, std::size_t assets,
                       const std::function<void(const RegimeSpec&)>& visit);
std::vector<RegimeSpec> enumerate_regimes(std::size_t days, std::size_t assets);

/// log₂ Σ_Q P₀(Q)·S_T(Q) over all regimes, by brute force.
double mixture_oracle_log2(const PriceRelativeMatrix& x, const PriorKind& prior,
                           const CostModel& cost = {},
                           RegimeCharge charge = RegimeCharge::switches_only);
double mixture_oracle(const PriceRelativeMatrix& x, const PriorKind& prior,
                      const CostModel& cost = {},
                      RegimeCharge charge = RegimeCharge::switches_only);
/// Same sum restricted to (and in the order of) `regimes`.
double mixture_log2_over(std::span<const RegimeSpec> regimes, const PriceRelativeMatrix& x,
                         const PriorKind& prior, const CostModel& cost = {},
                         RegimeCharge charge = RegimeCharge::switches_only);

/// ∏_{i=0}^{n−1} (i+1/2)/(i+1) and its −log₂.
struct KtProduct {
    double value;
    double neg_log2;
};
KtProduct kt_product(std::size_t n);

/// g(n) = √n·∏_{i=1}^{n} (i−1/2)/i for n = 1..n_max, built with the ratio
/// g(n+1) = √((n+1/2)²/(n(n+1)))·g(n).
std::vector<double> kt_g_sequence(std::size_t n_max);

/// Adaptive-prior penalty in bits:
/// (3/2)·l·log₂(T/l) + (1/2)·log₂T + (l+1)·log₂(4N), with the first term 0 at l = 0.
double theorem2_penalty(std::size_t days, std::size_t assets, std::size_t switches);

/// Fixed-γ penalty in bits: (l+1)·log₂N + l·log₂(1/γ) + (T−l)·log₂(1/(1−γ)).
double fixed_gamma_penalty(std::size_t days, std::size_t assets, std::size_t switches,
                           double gamma);

struct BoundReport {
    double regime_log_wealth;     ///< bits
    double penalty;               ///< bits
    double algorithm_log_wealth;  ///< bits
    double slack;                 ///< algorithm − (regime − penalty)
};

BoundReport bound_check(const PriceRelativeMatrix& x, const PriorKind& prior,
                        double algorithm_log2_wealth, const RegimeSpec& regime,
                        const CostModel& cost = {},
                        RegimeCharge charge = RegimeCharge::switches_only);

}  // namespace switchfolio

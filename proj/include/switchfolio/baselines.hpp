#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "switchfolio/core.hpp"
#include "switchfolio/costs.hpp"
#include "switchfolio/kernels.hpp"

namespace switchfolio {

/// Wealth series (days 0..T) of a constant rebalanced portfolio. With costs,
/// the post-return holdings are rebalanced back to `w` every day through
/// rebalance_total; the initial purchase is free.
std::vector<double> crp_run(const PortfolioVector& w, const PriceRelativeMatrix& x,
                            const CostModel& cost = {});

struct BcrpResult {
    PortfolioVector weights;
    double log2_wealth;
};

/// Best constant rebalanced portfolio in hindsight: maximizes Σ_t log(w·x^t)
/// over the simplex by projected-gradient ascent with backtracking, restarted
/// from every corner (up to five) and the uniform portfolio.
BcrpResult bcrp_solve(const PriceRelativeMatrix& x);

/// Euclidean projection onto the probability simplex.
std::vector<double> project_to_simplex(std::span<const double> v);

/// Exponentiated-gradient update: w'_i ∝ w_i·exp(η·x_i / (w·x)).
PortfolioVector eg_step(const PortfolioVector& w, std::span<const double> x, double eta);

/// Weights used on each day by EG(η) started from the uniform portfolio.
std::vector<PortfolioVector> eg_weights(const PriceRelativeMatrix& x, double eta);

struct UniversalConfig {
    std::size_t samples = 1;
    std::uint64_t seed = 0;
    CostModel cost;
};

/// `count` portfolios drawn uniformly from the N-simplex (row-major). Draw m
/// depends only on (seed, m), never on thread scheduling.
std::vector<double> sample_simplex(std::size_t count, std::size_t assets, std::uint64_t seed);

/// Sampled universal portfolio: the mean wealth series of `samples` CRPs drawn
/// uniformly from the simplex, each with its own rebalancing costs.
std::vector<double> universal_run(const PriceRelativeMatrix& x, const UniversalConfig& config);

/// universal_run plus the mean per-asset allocations and holdings.
kernels::CrpAggregate universal_track(const PriceRelativeMatrix& x, const UniversalConfig& config,
                                      bool use_reference_kernel = false);

struct BestStock {
    std::size_t index;
    double wealth;
};

/// Asset with the largest buy-and-hold wealth; ties go to the lowest index.
BestStock best_stock(const PriceRelativeMatrix& x);

}  // namespace switchfolio

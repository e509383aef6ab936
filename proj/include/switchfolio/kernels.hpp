#pragma once

// Data-parallel inner loops. Every kernel comes in two flavours: a plain
// serial reference kept for testing, and the production version which splits
// the work into fixed-size chunks (OpenMP when available) and combines the
// chunk partials in chunk order, so its result does not depend on the thread
// count.

#include <cstddef>
#include <span>
#include <vector>

#include "switchfolio/costs.hpp"

namespace switchfolio::kernels {

/// Sums produced while advancing one asset's wealth buckets by a day.
struct BucketSums {
    double total = 0.0;     ///< Σ of the advanced buckets
    double switch_out = 0.0;  ///< Σ hazard(age + 1)·bucket, mass leaving on the following day
};

/// Advances one asset's buckets: bucket k has age `oldest_age − k` and is
/// multiplied by survive[age]·scale. `survive` and `hazard` are indexed by age
/// and must cover `oldest_age + 1`.
BucketSums advance_buckets_reference(std::span<double> buckets, std::size_t oldest_age,
                                     std::span<const double> survive,
                                     std::span<const double> hazard, double scale);
BucketSums advance_buckets(std::span<double> buckets, std::size_t oldest_age,
                           std::span<const double> survive, std::span<const double> hazard,
                           double scale);

/// Wealth series (days 0..T) of one CRP, written into `out`.
void crp_series(std::span<const double> weights, const PriceRelativeMatrix& x,
                const CostModel& cost, std::span<double> out);

/// Sums over a set of CRPs, day by day. `allocation` holds the pre-return
/// holdings of day t+1 and `holdings` the post-return holdings, both T×N
/// row-major.
struct CrpAggregate {
    std::vector<double> wealth;
    std::vector<double> allocation;
    std::vector<double> holdings;

    void scale(double factor);
};

/// Aggregates the CRPs given by the rows of `portfolios` (row-major, `count`
/// × N) and divides by `count`.
CrpAggregate mean_crp_reference(std::span<const double> portfolios, std::size_t count,
                                const PriceRelativeMatrix& x, const CostModel& cost);
CrpAggregate mean_crp(std::span<const double> portfolios, std::size_t count,
                      const PriceRelativeMatrix& x, const CostModel& cost);

/// Caps OpenMP threads; 0 restores the runtime default. No-op without OpenMP.
void set_thread_limit(int threads);
int max_threads();

}  // namespace switchfolio::kernels

#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "switchfolio/core.hpp"
#include "switchfolio/costs.hpp"

namespace switchfolio {

/// Switching probability after holding a strategy for `dt` consecutive days:
/// (1/2)/(dt+1).
double gamma_hat(std::size_t dt);

/// Gross mass leaving and entering each asset on the next switch, before any
/// commission is taken. Used to compare against netted trading.
struct GrossFlows {
    std::vector<double> sold;
    std::vector<double> bought;
};

/// Fixed-γ switching portfolio with pure strategies. Holds the per-asset
/// wealth S_t^i after `day()` trading days, starting from a uniform unit split.
///
/// Values are stored relative to a running log-scale so multi-decade runs do
/// not leave double range; accessors return true wealth.
class FixedGammaState {
public:
    /// Throws Error{too_few_assets} for N < 2 and Error{gamma_out_of_range}
    /// unless 0 < γ ≤ (N−1)/N.
    FixedGammaState(std::size_t assets, double gamma);

    /// Applies one day of relatives. Day 1 only applies returns; later days
    /// first redistribute γ of every asset's wealth uniformly over the other
    /// assets, multiplying the switched-in mass by switch_factor(cost).
    void step(std::span<const double> x, const CostModel& cost = {});

    std::size_t assets() const noexcept { return wealth_.size(); }
    std::size_t day() const noexcept { return day_; }
    double gamma() const noexcept { return gamma_; }

    double total_wealth() const;
    double log_total_wealth() const;
    std::vector<double> asset_wealth() const;
    /// S_t^i / Σ_j S_t^j (post-return shares).
    std::vector<double> shares() const;
    /// Next-day weights: (1 − γ − γ/(N−1))·share_i + γ/(N−1) on the current shares.
    PortfolioVector weights() const;
    /// Pre-return wealth per asset for the next day under `cost`, i.e. the
    /// stay mass plus the charged switched-in mass. Sums to at most total.
    std::vector<double> next_masses(const CostModel& cost = {}) const;
    /// next_masses(cost) normalized: the allocation actually used next day.
    PortfolioVector allocation(const CostModel& cost = {}) const;
    /// Σ next_masses(cost) / total wealth.
    double retained_fraction(const CostModel& cost = {}) const;
    GrossFlows gross_flows() const;

private:
    std::vector<double> stored_masses(const CostModel& cost) const;

    double gamma_;
    std::size_t day_ = 0;
    double log_scale_ = 0.0;
    std::vector<double> wealth_;
};

enum class KernelMode { parallel, reference };

/// Adaptive switching portfolio. Bucket (i, t₀) holds the wealth that has been
/// in asset i since day t₀; buckets age by one each day and are never removed.
class AdaptiveState {
public:
    /// Throws Error{too_few_assets} for N < 2.
    explicit AdaptiveState(std::size_t assets, KernelMode mode = KernelMode::parallel);

    /// Zeroes buckets that fall below `threshold`·total after a step. 0 (the
    /// default) disables pruning.
    void set_prune_threshold(double threshold) { prune_threshold_ = threshold; }

    void step(std::span<const double> x, const CostModel& cost = {});

    std::size_t assets() const noexcept { return buckets_.size(); }
    std::size_t day() const noexcept { return day_; }
    std::size_t bucket_count() const noexcept { return assets() * day_; }
    /// Wealth S_{t,t₀}^i for 1 ≤ start_day ≤ day().
    double bucket(std::size_t asset, std::size_t start_day) const;

    double total_wealth() const;
    double log_total_wealth() const;
    /// Σ_{t₀} S_{t,t₀}^i.
    std::vector<double> asset_wealth() const;
    std::vector<double> shares() const;
    std::vector<double> next_masses(const CostModel& cost = {}) const;
    /// next_masses(cost) normalized.
    PortfolioVector weights(const CostModel& cost = {}) const;
    PortfolioVector allocation(const CostModel& cost = {}) const { return weights(cost); }
    double retained_fraction(const CostModel& cost = {}) const;
    GrossFlows gross_flows() const;

private:
    std::vector<double> stored_masses(const CostModel& cost) const;

    void ensure_tables(std::size_t max_age);

    KernelMode mode_;
    std::size_t day_ = 0;
    double log_scale_ = 0.0;
    double prune_threshold_ = 0.0;
    std::vector<std::vector<double>> buckets_;
    std::vector<double> asset_sum_;   // Σ_k buckets_[i][k]
    std::vector<double> switch_out_;  // mass leaving asset i on the next day
    std::vector<double> survive_;     // 1 − γ̂(age)
    std::vector<double> hazard_;      // γ̂(age)
};

FixedGammaState fixed_init(std::size_t assets, double gamma);
void fixed_step(FixedGammaState& state, std::span<const double> x, const CostModel& cost = {});
PortfolioVector fixed_weights(const FixedGammaState& state);

AdaptiveState adaptive_init(std::size_t assets);
void adaptive_step(AdaptiveState& state, std::span<const double> x, const CostModel& cost = {});
PortfolioVector adaptive_weights(const AdaptiveState& state, const CostModel& cost = {});

inline double total_wealth(const FixedGammaState& s) { return s.total_wealth(); }
inline double total_wealth(const AdaptiveState& s) { return s.total_wealth(); }

}  // namespace switchfolio

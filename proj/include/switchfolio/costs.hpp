#pragma once

#include <span>
#include <string>
#include <vector>

#include "switchfolio/core.hpp"

namespace switchfolio {

enum class CostKind { none, per_trade, parallel };

/// Commission model. `per_trade` charges c on every unit sold and every unit
/// bought; `parallel` charges c·Σ|S_i − S'_i| and shrinks all holdings
/// proportionally.
class CostModel {
public:
    constexpr CostModel() = default;
    /// Throws Error{invalid_cost} unless 0 ≤ rate < 0.5.
    CostModel(CostKind kind, double rate);

    static CostModel none() { return {}; }
    static CostModel per_trade(double rate) { return {CostKind::per_trade, rate}; }
    static CostModel parallel(double rate) { return {CostKind::parallel, rate}; }

    CostKind kind() const noexcept { return kind_; }
    double rate() const noexcept { return rate_; }
    bool active() const noexcept { return kind_ != CostKind::none && rate_ > 0.0; }

    std::string describe() const;

private:
    CostKind kind_ = CostKind::none;
    double rate_ = 0.0;
};

/// Parses "none", "per-trade" or "parallel".
CostKind parse_cost_kind(const std::string& text);

/// Wealth retained when a whole unit moves from one asset to another:
/// 1, (1−c)² or 1−2c.
double switch_factor(const CostModel& model);

/// Commission for moving from `current` to `target` holdings, charged on the
/// net per-asset deltas: c·Σ_i |current_i − target_i|.
double rebalance_cost(const CostModel& model, std::span<const double> current,
                      std::span<const double> target);

/// Total wealth left after rebalancing post-return holdings `held` to the
/// proportions `target`, trading only net per-asset deltas.
double rebalance_total(const CostModel& model, std::span<const double> held,
                       std::span<const double> target);

struct RealizedTrack {
    std::vector<double> wealth;    ///< post-return wealth, days 0..T
    std::vector<double> retained;  ///< per day 1..T: post-cost / pre-cost total
};

/// Simulates actually holding `weights[t]` on day t+1 (t = 0..T−1). The
/// initial purchase is free; from day 2 on, the previous day's post-return
/// holdings are rebalanced to that day's weights before returns apply.
RealizedTrack realized_track(const std::vector<PortfolioVector>& weights,
                             const PriceRelativeMatrix& x, const CostModel& model);

/// Wealth part of realized_track.
std::vector<double> realized_wealth_track(const std::vector<PortfolioVector>& weights,
                                          const PriceRelativeMatrix& x, const CostModel& model);

}  // namespace switchfolio

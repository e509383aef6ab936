#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "switchfolio/core.hpp"
#include "switchfolio/costs.hpp"

namespace switchfolio {

enum class AlgoKind { switching_fixed, switching_adaptive, crp, bcrp, eg, universal, best_stock };

/// bucket: the switching algorithms' own commission bookkeeping.
/// realized: costs::realized_track over the implied daily weights.
enum class CostAccounting { bucket, realized };

struct AlgoSpec {
    AlgoKind kind = AlgoKind::switching_adaptive;
    double gamma = 0.0;               // switching_fixed
    std::vector<double> crp_weights;  // crp
    double eta = 0.05;                // eg
    std::size_t samples = 10000;      // universal
    std::uint64_t seed = 0;           // universal
    CostModel cost;
    CostAccounting accounting = CostAccounting::bucket;

    /// Algorithm name, e.g. "switching-fixed".
    std::string name() const;
    /// Parameter echo, e.g. "gamma=0.333".
    std::string params() const;
    bool hindsight() const { return kind == AlgoKind::bcrp || kind == AlgoKind::best_stock; }
};

AlgoKind parse_algo_kind(const std::string& text);
CostAccounting parse_accounting(const std::string& text);

/// Parses "name[:key=value[,key=value...]]"; keys are gamma, w (slash
/// separated weights), eta, samples. Cost, accounting and seed come from
/// `base`.
AlgoSpec parse_algo_spec(const std::string& text, const AlgoSpec& base = {});

struct BacktestReport {
    AlgoSpec spec;
    std::size_t assets = 0;
    /// Wealth after each day's returns, days 0..T; wealth[0] = 1.
    std::vector<double> wealth;
    /// Shares of post-return wealth per asset, days 0..T (day 0: the first
    /// allocation).
    std::vector<std::vector<double>> holdings;
    std::vector<std::size_t> largest_asset;
    /// Allocation used on day t+1 (t = 0..T−1).
    std::vector<PortfolioVector> allocations;
    /// Per day: wealth invested after commissions / wealth before (≤ 1).
    std::vector<double> retained;
    /// Both accountings, filled for switching algorithms when costs are active.
    std::optional<std::vector<double>> bucket_wealth;
    std::optional<std::vector<double>> realized_wealth;

    double final_wealth() const { return wealth.back(); }
    std::size_t days() const { return wealth.size() - 1; }
};

/// Runs `spec` over `x`. Online algorithms choose day t's allocation from
/// days 1..t−1 only; bcrp and best-stock are flagged hindsight.
BacktestReport run(const AlgoSpec& spec, const PriceRelativeMatrix& x);

/// Largest peak-to-trough fall of a wealth series, as a fraction of the peak.
double max_drawdown(const std::vector<double>& wealth);

struct ComparisonRow {
    std::string name;
    std::string params;
    double final_wealth = 0.0;
    double max_drawdown = 0.0;
    bool hindsight = false;
};

/// One row per spec, in the given order. Throws Error{invalid_argument} for
/// an empty list.
std::vector<ComparisonRow> compare(const std::vector<AlgoSpec>& specs, const PriceRelativeMatrix& x);

std::string comparison_tsv(const std::vector<ComparisonRow>& rows);
std::string report_tsv(const BacktestReport& report);

/// CSV with header `day,wealth,largest_asset,w_1..w_N`, one row per day 0..T.
std::string emit_plot_data(const BacktestReport& report);

}  // namespace switchfolio

#include "switchfolio/regimes.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace switchfolio {

namespace {

constexpr double kLn2 = std::numbers::ln2;

// Running log-sum-exp in natural logs.
class LogSum {
public:
    void add(double v) {
        if (v == -std::numeric_limits<double>::infinity()) return;
        if (v > max_) {
            sum_ = sum_ * std::exp(max_ - v) + 1.0;
            max_ = v;
        } else {
            sum_ += std::exp(v - max_);
        }
    }
    double value() const { return max_ + std::log(sum_); }

private:
    double max_ = -std::numeric_limits<double>::infinity();
    double sum_ = 0.0;
};

// Segment j covers days (start, end] in 1-based day numbers.
template <typename Fn>
void for_each_segment(const RegimeSpec& regime, std::size_t days, Fn&& fn) {
    std::size_t start = 0;
    for (std::size_t j = 0; j < regime.strategies.size(); ++j) {
        const std::size_t end = j < regime.switch_times.size() ? regime.switch_times[j] : days;
        fn(regime.strategies[j], start, end, j + 1 == regime.strategies.size());
        start = end;
    }
}

double ln_prior(const RegimeSpec& regime, std::size_t days, std::size_t assets,
                const PriorKind& prior) {
    validate_regime(regime, days, assets);
    const double n = static_cast<double>(assets);
    const double l = static_cast<double>(regime.switches());
    double lp = -std::log(n);
    if (regime.switches() > 0) lp -= l * std::log(n - 1.0);
    if (prior.type == PriorKind::Type::fixed_gamma) {
        const double g = prior.gamma;
        const double stays = static_cast<double>(days) - l - 1.0;
        if (regime.switches() > 0) lp += l * std::log(g);
        if (stays > 0) lp += stays * std::log1p(-g);
        return lp;
    }
    for_each_segment(regime, days, [&](std::size_t, std::size_t start, std::size_t end, bool last) {
        const std::size_t length = end - start;
        for (std::size_t j = 1; j < length; ++j) {
            const double d = static_cast<double>(j);
            lp += std::log((d - 0.5) / d);
        }
        if (!last) lp += std::log(0.5 / static_cast<double>(length));
    });
    return lp;
}

double ln_regime_wealth(const RegimeSpec& regime, const PriceRelativeMatrix& x,
                        const CostModel& cost, RegimeCharge charge) {
    validate_regime(regime, x.days(), x.assets());
    double lw = 0.0;
    for_each_segment(regime, x.days(), [&](std::size_t asset, std::size_t start, std::size_t end, bool) {
        for (std::size_t t = start; t < end; ++t) lw += std::log(x(t, asset));
    });
    const double charged = static_cast<double>(regime.switches()) +
                           (charge == RegimeCharge::all_segments ? 1.0 : 0.0);
    if (charged > 0.0) lw += charged * std::log(switch_factor(cost));
    return lw;
}

void enumerate_from(RegimeSpec& regime, std::size_t day, std::size_t days, std::size_t assets,
                    const std::function<void(const RegimeSpec&)>& visit) {
    if (day == days) {
        visit(regime);
        return;
    }
    // Either keep holding through the next day, or switch after `day`.
    enumerate_from(regime, day + 1, days, assets, visit);
    const std::size_t current = regime.strategies.back();
    for (std::size_t next = 0; next < assets; ++next) {
        if (next == current) continue;
        regime.switch_times.push_back(day);
        regime.strategies.push_back(next);
        enumerate_from(regime, day + 1, days, assets, visit);
        regime.switch_times.pop_back();
        regime.strategies.pop_back();
    }
}

}  // namespace

PriorKind PriorKind::fixed(double gamma) {
    if (!(gamma > 0.0 && gamma < 1.0))
        throw Error(Errc::gamma_out_of_range, "fixed prior needs gamma in (0, 1)");
    return {Type::fixed_gamma, gamma};
}

double prior_fixed(const RegimeSpec& regime, std::size_t days, std::size_t assets, double gamma) {
    return std::exp(ln_prior(regime, days, assets, PriorKind::fixed(gamma)));
}

double prior_adaptive(const RegimeSpec& regime, std::size_t days, std::size_t assets) {
    return std::exp(ln_prior(regime, days, assets, PriorKind::adaptive()));
}

double log2_prior(const RegimeSpec& regime, std::size_t days, std::size_t assets,
                  const PriorKind& prior) {
    return ln_prior(regime, days, assets, prior) / kLn2;
}

double regime_wealth(const RegimeSpec& regime, const PriceRelativeMatrix& x, const CostModel& cost,
                     RegimeCharge charge) {
    return std::exp(ln_regime_wealth(regime, x, cost, charge));
}

double log2_regime_wealth(const RegimeSpec& regime, const PriceRelativeMatrix& x,
                          const CostModel& cost, RegimeCharge charge) {
    return ln_regime_wealth(regime, x, cost, charge) / kLn2;
}

double count_regimes(std::size_t days, std::size_t assets) {
    if (days == 0) return 0.0;
    return std::pow(static_cast<double>(assets), static_cast<double>(days));
}

void enumerate_regimes(std::size_t days, std::size_t assets,
                       const std::function<void(const RegimeSpec&)>& visit) {
    if (days == 0) return;
    if (count_regimes(days, assets) > kMaxEnumeratedRegimes)
        throw Error(Errc::instance_too_large, "more than 1e7 regimes to enumerate");
    RegimeSpec regime;
    for (std::size_t first = 0; first < assets; ++first) {
        regime.strategies = {first};
        regime.switch_times.clear();
        enumerate_from(regime, 1, days, assets, visit);
    }
}

std::vector<RegimeSpec> enumerate_regimes(std::size_t days, std::size_t assets) {
    std::vector<RegimeSpec> all;
    enumerate_regimes(days, assets, [&](const RegimeSpec& q) { all.push_back(q); });
    return all;
}

double mixture_log2_over(std::span<const RegimeSpec> regimes, const PriceRelativeMatrix& x,
                         const PriorKind& prior, const CostModel& cost, RegimeCharge charge) {
    LogSum acc;
    for (const auto& q : regimes)
        acc.add(ln_prior(q, x.days(), x.assets(), prior) + ln_regime_wealth(q, x, cost, charge));
    return acc.value() / kLn2;
}

double mixture_oracle_log2(const PriceRelativeMatrix& x, const PriorKind& prior,
                           const CostModel& cost, RegimeCharge charge) {
    if (x.days() == 0) return 0.0;
    LogSum acc;
    enumerate_regimes(x.days(), x.assets(), [&](const RegimeSpec& q) {
        acc.add(ln_prior(q, x.days(), x.assets(), prior) + ln_regime_wealth(q, x, cost, charge));
    });
    return acc.value() / kLn2;
}

double mixture_oracle(const PriceRelativeMatrix& x, const PriorKind& prior, const CostModel& cost,
                      RegimeCharge charge) {
    return std::exp2(mixture_oracle_log2(x, prior, cost, charge));
}

KtProduct kt_product(std::size_t n) {
    const double m = static_cast<double>(n);
    const double ln_value = std::lgamma(m + 0.5) - std::lgamma(0.5) - std::lgamma(m + 1.0);
    return {std::exp(ln_value), -ln_value / kLn2};
}

std::vector<double> kt_g_sequence(std::size_t n_max) {
    std::vector<double> g;
    if (n_max == 0) return g;
    g.reserve(n_max);
    g.push_back(0.5);
    for (std::size_t n = 1; n < n_max; ++n) {
        const double m = static_cast<double>(n);
        const double ratio = std::sqrt(1.0 + 0.25 / (m * (m + 1.0)));
        g.push_back(g.back() * ratio);
    }
    return g;
}

double theorem2_penalty(std::size_t days, std::size_t assets, std::size_t switches) {
    const double t = static_cast<double>(days);
    const double l = static_cast<double>(switches);
    const double spread = switches == 0 ? 0.0 : 1.5 * l * std::log2(t / l);
    return spread + 0.5 * std::log2(t) + (l + 1.0) * std::log2(4.0 * static_cast<double>(assets));
}

double fixed_gamma_penalty(std::size_t days, std::size_t assets, std::size_t switches,
                           double gamma) {
    const double t = static_cast<double>(days);
    const double l = static_cast<double>(switches);
    return (l + 1.0) * std::log2(static_cast<double>(assets)) + l * std::log2(1.0 / gamma) +
           (t - l) * -std::log2(1.0 - gamma);
}

BoundReport bound_check(const PriceRelativeMatrix& x, const PriorKind& prior,
                        double algorithm_log2_wealth, const RegimeSpec& regime,
                        const CostModel& cost, RegimeCharge charge) {
    BoundReport r{};
    r.regime_log_wealth = log2_regime_wealth(regime, x, cost, charge);
    r.penalty = prior.type == PriorKind::Type::adaptive
                    ? theorem2_penalty(x.days(), x.assets(), regime.switches())
                    : fixed_gamma_penalty(x.days(), x.assets(), regime.switches(), prior.gamma);
    r.algorithm_log_wealth = algorithm_log2_wealth;
    r.slack = algorithm_log2_wealth - (r.regime_log_wealth - r.penalty);
    return r;
}

}  // namespace switchfolio

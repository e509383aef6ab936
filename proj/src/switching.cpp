#include "switchfolio/switching.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "switchfolio/kernels.hpp"

namespace switchfolio {

namespace {

void check_row(std::span<const double> x, std::size_t n) {
    if (x.size() != n) {
        std::ostringstream os;
        os << "row has " << x.size() << " relatives, state has " << n << " assets";
        throw Error(Errc::dimension_mismatch, os.str());
    }
}

double sum(std::span<const double> v) { return std::accumulate(v.begin(), v.end(), 0.0); }

std::vector<double> scaled(std::vector<double> v, double log_scale) {
    const double s = std::exp(log_scale);
    for (auto& e : v) e *= s;
    return v;
}

}  // namespace

double gamma_hat(std::size_t dt) { return 0.5 / (static_cast<double>(dt) + 1.0); }

// ---------------------------------------------------------------------------

FixedGammaState::FixedGammaState(std::size_t assets, double gamma) : gamma_(gamma) {
    if (assets < 2) throw Error(Errc::too_few_assets, "switching needs at least two assets");
    const double n = static_cast<double>(assets);
    if (!(gamma > 0.0 && gamma <= (n - 1.0) / n)) {
        std::ostringstream os;
        os.precision(17);
        os << "gamma " << gamma << " outside (0, " << (n - 1.0) / n << "]";
        throw Error(Errc::gamma_out_of_range, os.str());
    }
    wealth_.assign(assets, 1.0 / n);
}

void FixedGammaState::step(std::span<const double> x, const CostModel& cost) {
    check_row(x, assets());
    if (day_ > 0) wealth_ = stored_masses(cost);
    for (std::size_t i = 0; i < assets(); ++i) wealth_[i] *= x[i];
    const double total = sum(wealth_);
    for (auto& w : wealth_) w /= total;
    log_scale_ += std::log(total);
    ++day_;
}

double FixedGammaState::total_wealth() const { return std::exp(log_total_wealth()); }

double FixedGammaState::log_total_wealth() const { return log_scale_ + std::log(sum(wealth_)); }

std::vector<double> FixedGammaState::asset_wealth() const { return scaled(wealth_, log_scale_); }

std::vector<double> FixedGammaState::shares() const {
    const double total = sum(wealth_);
    std::vector<double> s(wealth_);
    for (auto& e : s) e /= total;
    return s;
}

PortfolioVector FixedGammaState::weights() const {
    const double share_out = gamma_ / static_cast<double>(assets() - 1);
    auto w = shares();
    for (auto& e : w) e = (1.0 - gamma_ - share_out) * e + share_out;
    return normalize_to_simplex(w);
}

std::vector<double> FixedGammaState::next_masses(const CostModel& cost) const {
    return scaled(stored_masses(cost), log_scale_);
}

std::vector<double> FixedGammaState::stored_masses(const CostModel& cost) const {
    if (day_ == 0) return wealth_;
    const double total = sum(wealth_);
    const double moved = switch_factor(cost) * gamma_ / static_cast<double>(assets() - 1);
    std::vector<double> m(assets());
    for (std::size_t i = 0; i < assets(); ++i)
        m[i] = (1.0 - gamma_) * wealth_[i] + moved * (total - wealth_[i]);
    return m;
}

PortfolioVector FixedGammaState::allocation(const CostModel& cost) const {
    return normalize_to_simplex(stored_masses(cost));
}

double FixedGammaState::retained_fraction(const CostModel& cost) const {
    return sum(stored_masses(cost)) / sum(wealth_);
}

GrossFlows FixedGammaState::gross_flows() const {
    const double total = sum(wealth_);
    const double share_out = gamma_ / static_cast<double>(assets() - 1);
    GrossFlows f{std::vector<double>(assets()), std::vector<double>(assets())};
    if (day_ == 0) return f;
    for (std::size_t i = 0; i < assets(); ++i) {
        f.sold[i] = gamma_ * wealth_[i];
        f.bought[i] = share_out * (total - wealth_[i]);
    }
    f.sold = scaled(std::move(f.sold), log_scale_);
    f.bought = scaled(std::move(f.bought), log_scale_);
    return f;
}

// ---------------------------------------------------------------------------

AdaptiveState::AdaptiveState(std::size_t assets, KernelMode mode) : mode_(mode) {
    if (assets < 2) throw Error(Errc::too_few_assets, "switching needs at least two assets");
    buckets_.resize(assets);
    asset_sum_.assign(assets, 0.0);
    switch_out_.assign(assets, 0.0);
}

void AdaptiveState::ensure_tables(std::size_t max_age) {
    for (std::size_t age = hazard_.size(); age <= max_age; ++age) {
        hazard_.push_back(gamma_hat(age));
        survive_.push_back(1.0 - hazard_.back());
    }
}

void AdaptiveState::step(std::span<const double> x, const CostModel& cost) {
    const std::size_t n = assets();
    check_row(x, n);
    ensure_tables(day_ + 1);

    if (day_ == 0) {
        for (std::size_t i = 0; i < n; ++i) {
            const double seed = x[i] / static_cast<double>(n);
            buckets_[i].push_back(seed);
            asset_sum_[i] = seed;
            switch_out_[i] = seed * hazard_[0];
        }
        day_ = 1;
        return;
    }

    const double previous = sum(asset_sum_);
    const double inv = 1.0 / previous;
    log_scale_ += std::log(previous);

    const double all_out = sum(switch_out_);
    const double moved = switch_factor(cost) / static_cast<double>(n - 1);
    std::vector<double> fresh(n);
    for (std::size_t i = 0; i < n; ++i) fresh[i] = moved * (all_out - switch_out_[i]) * x[i] * inv;

    const std::size_t oldest_age = day_ - 1;
    for (std::size_t i = 0; i < n; ++i) {
        const auto sums = mode_ == KernelMode::parallel
                              ? kernels::advance_buckets(buckets_[i], oldest_age, survive_,
                                                         hazard_, x[i] * inv)
                              : kernels::advance_buckets_reference(buckets_[i], oldest_age,
                                                                   survive_, hazard_, x[i] * inv);
        buckets_[i].push_back(fresh[i]);
        asset_sum_[i] = sums.total + fresh[i];
        switch_out_[i] = sums.switch_out + fresh[i] * hazard_[0];
    }
    ++day_;

    if (prune_threshold_ > 0.0) {
        const double cutoff = prune_threshold_ * sum(asset_sum_);
        for (std::size_t i = 0; i < n; ++i) {
            double total = 0.0, out = 0.0;
            for (std::size_t k = 0; k < buckets_[i].size(); ++k) {
                auto& b = buckets_[i][k];
                if (b < cutoff) b = 0.0;
                total += b;
                out += b * hazard_[day_ - 1 - k];
            }
            asset_sum_[i] = total;
            switch_out_[i] = out;
        }
    }
}

double AdaptiveState::bucket(std::size_t asset, std::size_t start_day) const {
    if (asset >= assets() || start_day < 1 || start_day > day_)
        throw Error(Errc::invalid_argument, "no such bucket");
    return buckets_[asset][start_day - 1] * std::exp(log_scale_);
}

double AdaptiveState::total_wealth() const { return std::exp(log_total_wealth()); }

double AdaptiveState::log_total_wealth() const {
    if (day_ == 0) return 0.0;
    return log_scale_ + std::log(sum(asset_sum_));
}

std::vector<double> AdaptiveState::asset_wealth() const {
    if (day_ == 0) return std::vector<double>(assets(), 1.0 / static_cast<double>(assets()));
    return scaled(asset_sum_, log_scale_);
}

std::vector<double> AdaptiveState::shares() const {
    auto s = day_ == 0 ? asset_wealth() : asset_sum_;
    const double total = sum(s);
    for (auto& e : s) e /= total;
    return s;
}

std::vector<double> AdaptiveState::stored_masses(const CostModel& cost) const {
    const std::size_t n = assets();
    if (day_ == 0) return std::vector<double>(n, 1.0 / static_cast<double>(n));
    const double all_out = sum(switch_out_);
    const double moved = switch_factor(cost) / static_cast<double>(n - 1);
    std::vector<double> m(n);
    for (std::size_t i = 0; i < n; ++i)
        m[i] = (asset_sum_[i] - switch_out_[i]) + moved * (all_out - switch_out_[i]);
    return m;
}

std::vector<double> AdaptiveState::next_masses(const CostModel& cost) const {
    return scaled(stored_masses(cost), log_scale_);
}

PortfolioVector AdaptiveState::weights(const CostModel& cost) const {
    return normalize_to_simplex(stored_masses(cost));
}

double AdaptiveState::retained_fraction(const CostModel& cost) const {
    if (day_ == 0) return 1.0;
    return sum(stored_masses(cost)) / sum(asset_sum_);
}

GrossFlows AdaptiveState::gross_flows() const {
    const std::size_t n = assets();
    GrossFlows f{std::vector<double>(n), std::vector<double>(n)};
    if (day_ == 0) return f;
    const double all_out = sum(switch_out_);
    for (std::size_t i = 0; i < n; ++i) {
        f.sold[i] = switch_out_[i];
        f.bought[i] = (all_out - switch_out_[i]) / static_cast<double>(n - 1);
    }
    f.sold = scaled(std::move(f.sold), log_scale_);
    f.bought = scaled(std::move(f.bought), log_scale_);
    return f;
}

// ---------------------------------------------------------------------------

FixedGammaState fixed_init(std::size_t assets, double gamma) { return {assets, gamma}; }

void fixed_step(FixedGammaState& state, std::span<const double> x, const CostModel& cost) {
    state.step(x, cost);
}

PortfolioVector fixed_weights(const FixedGammaState& state) { return state.weights(); }

AdaptiveState adaptive_init(std::size_t assets) { return AdaptiveState(assets); }

void adaptive_step(AdaptiveState& state, std::span<const double> x, const CostModel& cost) {
    state.step(x, cost);
}

PortfolioVector adaptive_weights(const AdaptiveState& state, const CostModel& cost) {
    return state.weights(cost);
}

}  // namespace switchfolio

#include "switchfolio/baselines.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "switchfolio/kernels.hpp"

namespace switchfolio {

namespace {

double log_wealth(std::span<const double> w, const PriceRelativeMatrix& x) {
    double f = 0.0;
    for (std::size_t t = 0; t < x.days(); ++t) {
        const auto row = x.row(t);
        double r = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) r += w[i] * row[i];
        f += std::log(r);
    }
    return f;
}

std::vector<double> log_wealth_gradient(std::span<const double> w, const PriceRelativeMatrix& x) {
    std::vector<double> g(x.assets(), 0.0);
    for (std::size_t t = 0; t < x.days(); ++t) {
        const auto row = x.row(t);
        double r = 0.0;
        for (std::size_t i = 0; i < row.size(); ++i) r += w[i] * row[i];
        for (std::size_t i = 0; i < row.size(); ++i) g[i] += row[i] / r;
    }
    return g;
}

struct Ascent {
    std::vector<double> w;
    double f;
};

Ascent projected_ascent(std::vector<double> w, const PriceRelativeMatrix& x) {
    constexpr int kMaxIterations = 20000;
    constexpr double kArmijo = 1e-4;
    double f = log_wealth(w, x);
    double step = 0.0;
    for (int it = 0; it < kMaxIterations; ++it) {
        const auto g = log_wealth_gradient(w, x);
        if (step == 0.0) {
            const double scale = *std::max_element(g.begin(), g.end());
            step = 1.0 / scale;
        }
        bool moved = false;
        for (int halvings = 0; halvings < 80; ++halvings) {
            std::vector<double> trial(w.size());
            for (std::size_t i = 0; i < w.size(); ++i) trial[i] = w[i] + step * g[i];
            trial = project_to_simplex(trial);
            double ascent = 0.0, change = 0.0;
            for (std::size_t i = 0; i < w.size(); ++i) {
                ascent += g[i] * (trial[i] - w[i]);
                change = std::max(change, std::abs(trial[i] - w[i]));
            }
            if (change < 1e-15) return {w, f};  // stationary on the simplex
            const double ft = log_wealth(trial, x);
            if (ft >= f + kArmijo * ascent) {
                const double gain = ft - f;
                w = std::move(trial);
                f = ft;
                moved = true;
                if (gain <= 1e-15 * (1.0 + std::abs(f)) && change < 1e-12) return {w, f};
                step *= 2.0;
                break;
            }
            step *= 0.5;
        }
        if (!moved) break;
    }
    return {w, f};
}

std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

std::vector<double> crp_run(const PortfolioVector& w, const PriceRelativeMatrix& x,
                            const CostModel& cost) {
    if (w.size() != x.assets())
        throw Error(Errc::dimension_mismatch, "portfolio size differs from asset count");
    std::vector<double> series(x.days() + 1);
    kernels::crp_series(w.weights(), x, cost, series);
    return series;
}

std::vector<double> project_to_simplex(std::span<const double> v) {
    std::vector<double> u(v.begin(), v.end());
    std::sort(u.begin(), u.end(), std::greater<>());
    double cumulative = 0.0, theta = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cumulative += u[k];
        const double candidate = (cumulative - 1.0) / static_cast<double>(k + 1);
        if (u[k] - candidate > 0.0) theta = candidate;
    }
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = std::max(v[i] - theta, 0.0);
    const double s = std::accumulate(w.begin(), w.end(), 0.0);
    for (auto& e : w) e /= s;
    return w;
}

BcrpResult bcrp_solve(const PriceRelativeMatrix& x) {
    if (x.days() == 0) throw Error(Errc::no_data, "BCRP needs at least one day");
    const std::size_t n = x.assets();
    std::vector<std::vector<double>> starts;
    for (std::size_t i = 0; i < std::min<std::size_t>(n, 5); ++i) {
        std::vector<double> c(n, 0.0);
        c[i] = 1.0;
        starts.push_back(std::move(c));
    }
    starts.emplace_back(n, 1.0 / static_cast<double>(n));

    Ascent best{{}, -INFINITY};
    for (auto& s : starts) {
        auto result = projected_ascent(std::move(s), x);
        if (result.f > best.f) best = std::move(result);
    }
    return {normalize_to_simplex(best.w), best.f / std::numbers::ln2};
}

PortfolioVector eg_step(const PortfolioVector& w, std::span<const double> x, double eta) {
    const double r = daily_return(w, x);
    std::vector<double> e(w.size());
    double top = -INFINITY;
    for (std::size_t i = 0; i < w.size(); ++i) top = std::max(top, eta * x[i] / r);
    for (std::size_t i = 0; i < w.size(); ++i) e[i] = w[i] * std::exp(eta * x[i] / r - top);
    return normalize_to_simplex(e);
}

std::vector<PortfolioVector> eg_weights(const PriceRelativeMatrix& x, double eta) {
    std::vector<PortfolioVector> weights;
    weights.reserve(x.days());
    auto w = PortfolioVector::uniform(x.assets());
    for (std::size_t t = 0; t < x.days(); ++t) {
        weights.push_back(w);
        w = eg_step(w, x.row(t), eta);
    }
    return weights;
}

std::vector<double> sample_simplex(std::size_t count, std::size_t assets, std::uint64_t seed) {
    std::vector<double> out(count * assets);
    const std::uint64_t key = splitmix64(seed);
    for (std::size_t m = 0; m < count; ++m) {
        double total = 0.0;
        for (std::size_t i = 0; i < assets; ++i) {
            const std::uint64_t bits = splitmix64(key ^ splitmix64(m * assets + i));
            const double u = (static_cast<double>(bits >> 11) + 0.5) * 0x1.0p-53;
            const double e = -std::log(u);
            out[m * assets + i] = e;
            total += e;
        }
        for (std::size_t i = 0; i < assets; ++i) out[m * assets + i] /= total;
    }
    return out;
}

kernels::CrpAggregate universal_track(const PriceRelativeMatrix& x, const UniversalConfig& config,
                                      bool use_reference_kernel) {
    if (config.samples == 0) throw Error(Errc::invalid_argument, "need at least one sample");
    const auto portfolios = sample_simplex(config.samples, x.assets(), config.seed);
    return use_reference_kernel
               ? kernels::mean_crp_reference(portfolios, config.samples, x, config.cost)
               : kernels::mean_crp(portfolios, config.samples, x, config.cost);
}

std::vector<double> universal_run(const PriceRelativeMatrix& x, const UniversalConfig& config) {
    return universal_track(x, config).wealth;
}

BestStock best_stock(const PriceRelativeMatrix& x) {
    if (x.days() == 0) throw Error(Errc::no_data, "best stock needs at least one day");
    BestStock best{0, -INFINITY};
    double best_log = -INFINITY;
    for (std::size_t i = 0; i < x.assets(); ++i) {
        double lw = 0.0;
        for (std::size_t t = 0; t < x.days(); ++t) lw += std::log(x(t, i));
        if (lw > best_log) {
            best_log = lw;
            best = {i, std::exp(lw)};
        }
    }
    return best;
}

}  // namespace switchfolio

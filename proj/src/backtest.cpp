#include "switchfolio/backtest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <numeric>
#include <sstream>

#include "switchfolio/baselines.hpp"
#include "switchfolio/market_data.hpp"
#include "switchfolio/switching.hpp"

namespace switchfolio {

namespace {

std::vector<double> normalized(std::span<const double> v) {
    const double s = std::accumulate(v.begin(), v.end(), 0.0);
    std::vector<double> out(v.begin(), v.end());
    for (auto& e : out) e /= s;
    return out;
}

double parse_number(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (text.empty() || *end != '\0')
        throw Error(Errc::invalid_argument, "bad value '" + text + "' for " + key);
    return v;
}

void finish_holdings(BacktestReport& r) {
    r.largest_asset.clear();
    for (const auto& h : r.holdings) r.largest_asset.push_back(argmax_lowest(h));
}

// Fills wealth and holdings by simulating the report's allocations.
void apply_realized(BacktestReport& r, const PriceRelativeMatrix& x) {
    auto track = realized_track(r.allocations, x, r.spec.cost);
    r.wealth = std::move(track.wealth);
    r.retained = std::move(track.retained);
    if (!r.allocations.empty()) {
        const auto first = r.allocations[0].weights();
        r.holdings.assign(1, std::vector<double>(first.begin(), first.end()));
    }
    r.holdings.resize(1);
    std::vector<double> held(x.assets());
    for (std::size_t t = 0; t < x.days(); ++t) {
        for (std::size_t i = 0; i < x.assets(); ++i) held[i] = r.allocations[t][i] * x(t, i);
        r.holdings.push_back(normalized(held));
    }
}

template <typename State>
void run_switching(BacktestReport& r, State state, const PriceRelativeMatrix& x) {
    const auto& cost = r.spec.cost;
    r.wealth = {1.0};
    r.holdings = {state.shares()};
    for (std::size_t t = 0; t < x.days(); ++t) {
        r.allocations.push_back(state.allocation(cost));
        r.retained.push_back(state.retained_fraction(cost));
        state.step(x.row(t), cost);
        r.wealth.push_back(state.total_wealth());
        r.holdings.push_back(state.shares());
    }
    if (!cost.active()) return;
    r.bucket_wealth = r.wealth;
    auto bucket_holdings = r.holdings;
    auto bucket_retained = r.retained;
    apply_realized(r, x);
    r.realized_wealth = r.wealth;
    if (r.spec.accounting == CostAccounting::bucket) {
        r.wealth = *r.bucket_wealth;
        r.holdings = std::move(bucket_holdings);
        r.retained = std::move(bucket_retained);
    }
}

void run_constant(BacktestReport& r, const PortfolioVector& w, const PriceRelativeMatrix& x) {
    r.allocations.assign(x.days(), w);
    r.holdings = {std::vector<double>(w.weights().begin(), w.weights().end())};
    apply_realized(r, x);
}

}  // namespace

std::string AlgoSpec::name() const {
    switch (kind) {
        case AlgoKind::switching_fixed: return "switching-fixed";
        case AlgoKind::switching_adaptive: return "switching-adaptive";
        case AlgoKind::crp: return "crp";
        case AlgoKind::bcrp: return "bcrp";
        case AlgoKind::eg: return "eg";
        case AlgoKind::universal: return "universal";
        case AlgoKind::best_stock: return "best-stock";
    }
    return "unknown";
}

std::string AlgoSpec::params() const {
    std::ostringstream os;
    switch (kind) {
        case AlgoKind::switching_fixed: os << "gamma=" << format_double(gamma); break;
        case AlgoKind::crp:
            os << "w=";
            for (std::size_t i = 0; i < crp_weights.size(); ++i)
                os << (i ? "/" : "") << format_double(crp_weights[i]);
            break;
        case AlgoKind::eg: os << "eta=" << format_double(eta); break;
        case AlgoKind::universal: os << "samples=" << samples << ";seed=" << seed; break;
        default: os << "-"; break;
    }
    return os.str();
}

AlgoKind parse_algo_kind(const std::string& text) {
    if (text == "switching-fixed") return AlgoKind::switching_fixed;
    if (text == "switching-adaptive") return AlgoKind::switching_adaptive;
    if (text == "crp") return AlgoKind::crp;
    if (text == "bcrp") return AlgoKind::bcrp;
    if (text == "eg") return AlgoKind::eg;
    if (text == "universal") return AlgoKind::universal;
    if (text == "best-stock") return AlgoKind::best_stock;
    throw Error(Errc::invalid_argument, "unknown algorithm '" + text + "'");
}

CostAccounting parse_accounting(const std::string& text) {
    if (text == "bucket") return CostAccounting::bucket;
    if (text == "realized") return CostAccounting::realized;
    throw Error(Errc::invalid_argument, "unknown cost accounting '" + text + "'");
}

AlgoSpec parse_algo_spec(const std::string& text, const AlgoSpec& base) {
    AlgoSpec spec = base;
    const auto colon = text.find(':');
    spec.kind = parse_algo_kind(text.substr(0, colon));
    bool have_gamma = false, have_weights = false;
    if (colon != std::string::npos) {
        std::istringstream params(text.substr(colon + 1));
        std::string item;
        while (std::getline(params, item, ',')) {
            const auto eq = item.find('=');
            if (eq == std::string::npos)
                throw Error(Errc::invalid_argument, "expected key=value in '" + item + "'");
            const auto key = item.substr(0, eq);
            const auto value = item.substr(eq + 1);
            if (key == "gamma") {
                spec.gamma = parse_number(key, value);
                have_gamma = true;
            } else if (key == "eta") {
                spec.eta = parse_number(key, value);
            } else if (key == "samples") {
                spec.samples = static_cast<std::size_t>(parse_number(key, value));
            } else if (key == "w") {
                spec.crp_weights.clear();
                std::istringstream ws(value);
                std::string part;
                while (std::getline(ws, part, '/')) spec.crp_weights.push_back(parse_number(key, part));
                have_weights = true;
            } else {
                throw Error(Errc::invalid_argument, "unknown parameter '" + key + "'");
            }
        }
    }
    if (spec.kind == AlgoKind::switching_fixed && !have_gamma && !(base.gamma > 0.0))
        throw Error(Errc::invalid_argument, "switching-fixed needs gamma");
    if (spec.kind == AlgoKind::crp && !have_weights && base.crp_weights.empty())
        throw Error(Errc::invalid_argument, "crp needs w");
    return spec;
}

BacktestReport run(const AlgoSpec& spec, const PriceRelativeMatrix& x) {
    BacktestReport r;
    r.spec = spec;
    r.assets = x.assets();
    const std::size_t n = x.assets();
    switch (spec.kind) {
        case AlgoKind::switching_fixed: run_switching(r, FixedGammaState(n, spec.gamma), x); break;
        case AlgoKind::switching_adaptive: run_switching(r, AdaptiveState(n), x); break;
        case AlgoKind::crp: run_constant(r, PortfolioVector(spec.crp_weights), x); break;
        case AlgoKind::bcrp: run_constant(r, bcrp_solve(x).weights, x); break;
        case AlgoKind::best_stock: run_constant(r, PortfolioVector::corner(n, best_stock(x).index), x); break;
        case AlgoKind::eg: {
            if (!(spec.eta >= 0.0)) throw Error(Errc::invalid_argument, "eta must be nonnegative");
            r.allocations = eg_weights(x, spec.eta);
            r.holdings = {normalized(PortfolioVector::uniform(n).weights())};
            apply_realized(r, x);
            break;
        }
        case AlgoKind::universal: {
            const auto agg = universal_track(x, {spec.samples, spec.seed, spec.cost});
            r.wealth = agg.wealth;
            r.holdings = {normalized(PortfolioVector::uniform(n).weights())};
            for (std::size_t t = 0; t < x.days(); ++t) {
                std::span<const double> alloc(agg.allocation.data() + t * n, n);
                std::span<const double> held(agg.holdings.data() + t * n, n);
                if (t == 0) r.holdings[0] = normalized(alloc);
                r.allocations.push_back(normalize_to_simplex(alloc));
                r.retained.push_back(std::accumulate(alloc.begin(), alloc.end(), 0.0) / r.wealth[t]);
                r.holdings.push_back(normalized(held));
            }
            break;
        }
    }
    finish_holdings(r);
    return r;
}

double max_drawdown(const std::vector<double>& wealth) {
    double peak = 0.0, worst = 0.0;
    for (double w : wealth) {
        peak = std::max(peak, w);
        if (peak > 0.0) worst = std::max(worst, 1.0 - w / peak);
    }
    return worst;
}

std::vector<ComparisonRow> compare(const std::vector<AlgoSpec>& specs, const PriceRelativeMatrix& x) {
    if (specs.empty()) throw Error(Errc::invalid_argument, "compare needs at least one algorithm");
    // Specs run concurrently; each row lands in its own slot, so the table
    // order is the spec order regardless of scheduling.
    std::vector<ComparisonRow> rows(specs.size());
    std::vector<std::exception_ptr> errors(specs.size());
    const auto count = static_cast<long>(specs.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (long k = 0; k < count; ++k) {
        const auto& spec = specs[static_cast<std::size_t>(k)];
        try {
            const auto report = run(spec, x);
            rows[static_cast<std::size_t>(k)] = {spec.name(), spec.params(), report.final_wealth(),
                                                 max_drawdown(report.wealth), spec.hindsight()};
        } catch (...) {
            errors[static_cast<std::size_t>(k)] = std::current_exception();
        }
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);
    return rows;
}

std::string comparison_tsv(const std::vector<ComparisonRow>& rows) {
    std::ostringstream os;
    os << "algorithm\tparams\tfinal_wealth\tmax_drawdown\thindsight\n";
    for (const auto& r : rows)
        os << r.name << '\t' << r.params << '\t' << format_double(r.final_wealth) << '\t'
           << format_double(r.max_drawdown) << '\t' << (r.hindsight ? "yes" : "no") << '\n';
    return os.str();
}

std::string report_tsv(const BacktestReport& report) {
    std::ostringstream os;
    const auto& s = report.spec;
    os << "key\tvalue\n";
    os << "algorithm\t" << s.name() << '\n';
    os << "params\t" << s.params() << '\n';
    os << "cost\t" << s.cost.describe() << '\n';
    os << "accounting\t" << (s.accounting == CostAccounting::bucket ? "bucket" : "realized") << '\n';
    os << "hindsight\t" << (s.hindsight() ? "yes" : "no") << '\n';
    os << "days\t" << report.days() << '\n';
    os << "assets\t" << report.assets << '\n';
    os << "final_wealth\t" << format_double(report.final_wealth()) << '\n';
    os << "log2_wealth\t" << format_double(std::log2(report.final_wealth())) << '\n';
    if (report.bucket_wealth)
        os << "bucket_final_wealth\t" << format_double(report.bucket_wealth->back()) << '\n';
    if (report.realized_wealth)
        os << "realized_final_wealth\t" << format_double(report.realized_wealth->back()) << '\n';
    os << "max_drawdown\t" << format_double(max_drawdown(report.wealth)) << '\n';
    os << "final_largest_asset\t" << report.largest_asset.back() << '\n';
    return os.str();
}

std::string emit_plot_data(const BacktestReport& report) {
    std::ostringstream os;
    os << "day,wealth,largest_asset";
    for (std::size_t i = 1; i <= report.assets; ++i) os << ",w_" << i;
    os << '\n';
    for (std::size_t d = 0; d < report.wealth.size(); ++d) {
        os << d << ',' << format_double(report.wealth[d]) << ',' << report.largest_asset[d];
        for (double h : report.holdings[d]) os << ',' << format_double(h);
        os << '\n';
    }
    return os.str();
}

}  // namespace switchfolio

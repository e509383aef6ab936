// switchfolio: command-line front end for the switching-portfolio library.
//
// Exit codes: 0 success, 1 usage error, 2 data or validation error.

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "switchfolio/backtest.hpp"
#include "switchfolio/kernels.hpp"
#include "switchfolio/market_data.hpp"
#include "switchfolio/regimes.hpp"
#include "switchfolio/switching.hpp"

namespace sf = switchfolio;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataOptions {
    std::string path;
    std::string mode = "relatives";
};

struct CostOptions {
    std::string model = "none";
    double rate = 0.0;

    sf::CostModel build() const { return sf::CostModel(sf::parse_cost_kind(model), rate); }
};

void add_data(CLI::App* cmd, DataOptions& d) {
    cmd->add_option("--data", d.path, "CSV of relatives or prices (header row, optional date column)")
        ->required();
    cmd->add_option("--mode", d.mode, "How to read --data")
        ->check(CLI::IsMember({"relatives", "prices"}));
}

void add_cost(CLI::App* cmd, CostOptions& c) {
    cmd->add_option("--cost-model", c.model, "Commission model")
        ->check(CLI::IsMember({"none", "per-trade", "parallel"}));
    cmd->add_option("--cost-rate", c.rate, "Commission rate c in [0, 0.5)");
}

sf::PriceRelativeMatrix load(const DataOptions& d) {
    return sf::load_csv(d.path, sf::parse_series_mode(d.mode)).relatives;
}

std::vector<std::size_t> parse_indices(const std::string& text) {
    std::vector<std::size_t> out;
    std::istringstream is(text);
    std::string part;
    while (std::getline(is, part, ',')) {
        if (part.empty()) continue;
        char* end = nullptr;
        const auto v = std::strtoull(part.c_str(), &end, 10);
        if (*end != '\0') throw UsageError("bad index list '" + text + "'");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

sf::PriorKind build_prior(const std::string& prior, double gamma, bool have_gamma) {
    if (prior == "adaptive") return sf::PriorKind::adaptive();
    if (!have_gamma) throw UsageError("--prior fixed requires --gamma");
    return sf::PriorKind::fixed(gamma);
}

double algorithm_log2_wealth(const sf::PriceRelativeMatrix& x, const sf::PriorKind& prior,
                             const sf::CostModel& cost) {
    if (x.days() == 0) return 0.0;
    if (prior.type == sf::PriorKind::Type::adaptive) {
        sf::AdaptiveState s(x.assets());
        for (std::size_t t = 0; t < x.days(); ++t) s.step(x.row(t), cost);
        return s.log_total_wealth() / std::log(2.0);
    }
    sf::FixedGammaState s(x.assets(), prior.gamma);
    for (std::size_t t = 0; t < x.days(); ++t) s.step(x.row(t), cost);
    return s.log_total_wealth() / std::log(2.0);
}

std::string join(const std::vector<std::size_t>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
    return s.empty() ? "-" : s;
}

void apply_thread_limit() {
    if (const char* env = std::getenv("REGIME_SWITCH_THREADS")) {
        char* end = nullptr;
        const long threads = std::strtol(env, &end, 10);
        if (*end == '\0' && threads >= 0) sf::kernels::set_thread_limit(static_cast<int>(threads));
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Switching portfolios: online asset allocation over switching regimes"};
    app.require_subcommand(1);
    app.fallthrough();

    std::uint64_t seed = 0;
    std::string out_path;
    app.add_option("--seed", seed, "Seed for all sampling (universal portfolio)");
    app.add_option("--out", out_path, "Write output here instead of stdout");

    // synth
    auto* synth = app.add_subcommand("synth", "Write a synthetic market as a relatives CSV");
    std::string synth_kind;
    std::size_t synth_n = 0;
    synth->add_option("--kind", synth_kind, "Market to generate")
        ->required()
        ->check(CLI::IsMember({"volatility-pair", "regime-pair"}));
    synth->add_option("--n", synth_n, "Half-period (volatility-pair) or phase length (regime-pair)")
        ->required()
        ->check(CLI::PositiveNumber);

    // backtest
    auto* backtest = app.add_subcommand("backtest", "Run one algorithm over a market");
    DataOptions bt_data;
    CostOptions bt_cost;
    std::string bt_algo, bt_weights, bt_accounting = "bucket", bt_format = "tsv";
    double bt_gamma = 0.0, bt_eta = 0.05;
    std::size_t bt_samples = 10000;
    add_data(backtest, bt_data);
    add_cost(backtest, bt_cost);
    backtest->add_option("--algo", bt_algo, "Algorithm")
        ->required()
        ->check(CLI::IsMember({"switching-fixed", "switching-adaptive", "crp", "bcrp", "eg",
                               "universal", "best-stock"}));
    auto* bt_gamma_opt = backtest->add_option("--gamma", bt_gamma, "Switching probability for switching-fixed");
    auto* bt_weights_opt = backtest->add_option("--weights", bt_weights, "CRP weights, comma separated");
    backtest->add_option("--eta", bt_eta, "EG learning rate");
    backtest->add_option("--samples", bt_samples, "Universal portfolio sample count")
        ->check(CLI::PositiveNumber);
    backtest->add_option("--accounting", bt_accounting, "Commission bookkeeping")
        ->check(CLI::IsMember({"bucket", "realized"}));
    backtest->add_option("--format", bt_format, "tsv summary or csv plot data")
        ->check(CLI::IsMember({"tsv", "csv"}));

    // compare
    auto* cmp = app.add_subcommand("compare", "Compare several algorithms on one market");
    DataOptions cmp_data;
    CostOptions cmp_cost;
    std::vector<std::string> cmp_algos;
    std::string cmp_accounting = "bucket";
    add_data(cmp, cmp_data);
    add_cost(cmp, cmp_cost);
    cmp->add_option("--algo", cmp_algos,
                    "Algorithm spec name[:key=value,...], repeatable; keys: gamma, w (a/b/..), eta, samples")
        ->take_all();
    cmp->add_option("--accounting", cmp_accounting, "Commission bookkeeping")
        ->check(CLI::IsMember({"bucket", "realized"}));

    // oracle
    auto* oracle = app.add_subcommand("oracle", "Brute-force regime mixture vs. the recursive algorithm");
    DataOptions or_data;
    CostOptions or_cost;
    std::string or_prior, or_convention = "switches-only";
    double or_gamma = 0.0;
    add_data(oracle, or_data);
    add_cost(oracle, or_cost);
    oracle->add_option("--prior", or_prior, "Regime prior")
        ->required()
        ->check(CLI::IsMember({"fixed", "adaptive"}));
    auto* or_gamma_opt = oracle->add_option("--gamma", or_gamma, "Switching probability for --prior fixed");
    oracle->add_option("--convention", or_convention, "Which segments pay commission")
        ->check(CLI::IsMember({"switches-only", "all-segments"}));

    // bounds
    auto* bounds = app.add_subcommand("bounds", "Competitiveness bound against a switching regime");
    DataOptions bd_data;
    CostOptions bd_cost;
    std::string bd_prior, bd_switch_times, bd_strategies;
    double bd_gamma = 0.0;
    add_data(bounds, bd_data);
    add_cost(bounds, bd_cost);
    bounds->add_option("--prior", bd_prior, "Regime prior")
        ->required()
        ->check(CLI::IsMember({"fixed", "adaptive"}));
    auto* bd_gamma_opt = bounds->add_option("--gamma", bd_gamma, "Switching probability for --prior fixed");
    auto* bd_st_opt = bounds->add_option("--switch-times", bd_switch_times,
                                         "Days after which the regime switches, comma separated");
    auto* bd_sg_opt = bounds->add_option("--strategies", bd_strategies,
                                         "Asset held in each segment, comma separated (0-based)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    apply_thread_limit();
    std::ostringstream out;
    try {
        if (*synth) {
            const auto x = synth_kind == "volatility-pair" ? sf::synth_volatility_pair(synth_n)
                                                           : sf::synth_regime_pair(synth_n);
            out << sf::to_csv(x);
        } else if (*backtest) {
            if (bt_algo == "switching-fixed" && bt_gamma_opt->count() == 0)
                throw UsageError("--algo switching-fixed requires --gamma");
            if (bt_algo == "crp" && bt_weights_opt->count() == 0)
                throw UsageError("--algo crp requires --weights");
            sf::AlgoSpec spec;
            spec.kind = sf::parse_algo_kind(bt_algo);
            spec.gamma = bt_gamma;
            spec.eta = bt_eta;
            spec.samples = bt_samples;
            spec.seed = seed;
            spec.accounting = sf::parse_accounting(bt_accounting);
            if (!bt_weights.empty()) {
                std::istringstream ws(bt_weights);
                std::string part;
                while (std::getline(ws, part, ',')) spec.crp_weights.push_back(std::stod(part));
            }
            spec.cost = bt_cost.build();
            const auto x = load(bt_data);
            const auto report = sf::run(spec, x);
            out << (bt_format == "csv" ? sf::emit_plot_data(report) : sf::report_tsv(report));
        } else if (*cmp) {
            sf::AlgoSpec base;
            base.seed = seed;
            base.cost = cmp_cost.build();
            base.accounting = sf::parse_accounting(cmp_accounting);
            if (cmp_algos.empty())
                cmp_algos = {"best-stock", "bcrp", "eg:eta=0.05", "universal:samples=10000",
                             "switching-fixed:gamma=0.3333333333333333", "switching-adaptive"};
            std::vector<sf::AlgoSpec> specs;
            for (const auto& text : cmp_algos) {
                try {
                    specs.push_back(sf::parse_algo_spec(text, base));
                } catch (const sf::Error& e) {
                    throw UsageError(e.what());
                }
            }
            const auto x = load(cmp_data);
            out << sf::comparison_tsv(sf::compare(specs, x));
        } else if (*oracle) {
            const auto prior = build_prior(or_prior, or_gamma, or_gamma_opt->count() > 0);
            const auto cost = or_cost.build();
            const auto convention = or_convention == "all-segments" ? sf::RegimeCharge::all_segments
                                                                    : sf::RegimeCharge::switches_only;
            const auto x = load(or_data);
            const double oracle_log2 = sf::mixture_oracle_log2(x, prior, cost, convention);
            const double algo_log2 = algorithm_log2_wealth(x, prior, cost);
            const double oracle_w = std::exp2(oracle_log2);
            const double algo_w = std::exp2(algo_log2);
            out << "key\tvalue\n";
            out << "regimes\t" << sf::format_double(sf::count_regimes(x.days(), x.assets())) << '\n';
            out << "oracle_wealth\t" << sf::format_double(oracle_w) << '\n';
            out << "algorithm_wealth\t" << sf::format_double(algo_w) << '\n';
            out << "oracle_log2_wealth\t" << sf::format_double(oracle_log2) << '\n';
            out << "algorithm_log2_wealth\t" << sf::format_double(algo_log2) << '\n';
            out << "relative_gap\t" << sf::format_double(std::abs(algo_w - oracle_w) / oracle_w) << '\n';
        } else if (*bounds) {
            const auto prior = build_prior(bd_prior, bd_gamma, bd_gamma_opt->count() > 0);
            if (bd_st_opt->count() > 0 && bd_sg_opt->count() == 0)
                throw UsageError("--switch-times requires --strategies");
            const auto cost = bd_cost.build();
            const auto x = load(bd_data);
            if (x.days() < 2) throw sf::Error(sf::Errc::no_data, "bounds need at least two days");
            const double algo_log2 = algorithm_log2_wealth(x, prior, cost);
            std::vector<sf::RegimeSpec> regimes;
            if (bd_sg_opt->count() > 0) {
                sf::RegimeSpec q{parse_indices(bd_switch_times), parse_indices(bd_strategies)};
                sf::validate_regime(q, x.days(), x.assets());
                regimes.push_back(q);
            } else {
                // Tightest regime: the one maximizing log wealth minus penalty.
                sf::RegimeSpec best;
                double best_score = -INFINITY;
                sf::enumerate_regimes(x.days(), x.assets(), [&](const sf::RegimeSpec& q) {
                    const auto r = sf::bound_check(x, prior, algo_log2, q, cost);
                    const double score = r.regime_log_wealth - r.penalty;
                    if (score > best_score) {
                        best_score = score;
                        best = q;
                    }
                });
                regimes.push_back(best);
            }
            out << "switch_times\tstrategies\tregime_log_wealth\tpenalty\talgorithm_log_wealth\tslack\n";
            for (const auto& q : regimes) {
                const auto r = sf::bound_check(x, prior, algo_log2, q, cost);
                out << join(q.switch_times) << '\t' << join(q.strategies) << '\t'
                    << sf::format_double(r.regime_log_wealth) << '\t' << sf::format_double(r.penalty)
                    << '\t' << sf::format_double(r.algorithm_log_wealth) << '\t'
                    << sf::format_double(r.slack) << '\n';
            }
        }
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\nRun with --help for usage.\n";
        return 1;
    } catch (const sf::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }

    if (out_path.empty()) {
        std::cout << out.str();
    } else {
        std::ofstream file(out_path, std::ios::binary);
        if (!file) {
            std::cerr << "error: cannot write '" << out_path << "'\n";
            return 2;
        }
        file << out.str();
    }
    return 0;
}

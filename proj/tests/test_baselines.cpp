#include <numeric>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "switchfolio/baselines.hpp"
#include "switchfolio/kernels.hpp"
#include "switchfolio/market_data.hpp"

using namespace switchfolio;
using testsupport::matrix;

TEST_CASE("crp_run examples") {
    const auto half = PortfolioVector::uniform(2);
    for (std::size_t n : {1u, 3u, 6u, 20u}) {
        const auto w = crp_run(half, synth_volatility_pair(n));
        CHECK(w.size() == 2 * n + 1);
        CHECK(w.back() == doctest::Approx(std::pow(9.0 / 8.0, n)).epsilon(1e-12));
        CHECK(crp_run(half, synth_regime_pair(n)).back() ==
              doctest::Approx(std::pow(7.0 / 8.0, 2 * n)).epsilon(1e-12));
    }
    const auto x = matrix({{1.1, 0.9}, {0.8, 1.3}});
    for (auto cost : {CostModel::none(), CostModel::per_trade(0.1), CostModel::parallel(0.1)})
        CHECK(crp_run(PortfolioVector::corner(2, 0), x, cost).back() == doctest::Approx(0.88).epsilon(1e-15));
    CHECK_THROWS_AS(crp_run(PortfolioVector::uniform(3), x), Error);
}

TEST_CASE("bcrp_solve examples") {
    const auto dom = matrix({{1.2, 1.0}, {1.1, 0.9}, {1.3, 1.2}});
    const auto r = bcrp_solve(dom);
    CHECK(r.weights[0] == doctest::Approx(1.0).epsilon(1e-9));
    const auto one = PriceRelativeMatrix::from_rows({{1.5}, {0.5}}, {"solo"});
    CHECK(bcrp_solve(one).weights[0] == 1.0);
    CHECK_THROWS_AS(bcrp_solve(PriceRelativeMatrix::from_rows({}, {"a", "b"})), Error);
    // Volatility pair: the optimum is the half-half CRP.
    const auto v = bcrp_solve(synth_volatility_pair(5));
    CHECK(v.weights[0] == doctest::Approx(0.5).epsilon(1e-7));
}

TEST_CASE("project_to_simplex") {
    const std::vector<double> a{0.2, 0.3, 0.5}, b{2.0, 0.0}, c{0.5, 0.5, 0.5};
    const auto pa = project_to_simplex(a);
    CHECK(pa[0] == doctest::Approx(0.2).epsilon(1e-15));
    const auto pb = project_to_simplex(b);
    CHECK(pb[0] == 1.0);
    CHECK(pb[1] == 0.0);
    for (double v : project_to_simplex(c)) CHECK(v == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("eg_step examples") {
    const auto w = PortfolioVector({0.3, 0.7});
    const std::vector<double> x{2.0, 1.0};
    const auto same = eg_step(w, x, 0.0);
    CHECK(same[0] == doctest::Approx(0.3).epsilon(1e-15));
    const std::vector<double> flat{1.3, 1.3};
    CHECK(eg_step(PortfolioVector::uniform(2), flat, 0.05)[0] == doctest::Approx(0.5).epsilon(1e-15));
    const auto up = eg_step(PortfolioVector::uniform(2), x, 0.05);
    const double e1 = std::exp(0.05 * 2.0 / 1.5), e2 = std::exp(0.05 * 1.0 / 1.5);
    CHECK(up[0] == doctest::Approx(e1 / (e1 + e2)).epsilon(1e-15));
    CHECK(up[0] == doctest::Approx(0.50833).epsilon(1e-5));
}

TEST_CASE("eg_weights starts uniform and is online") {
    const auto x = matrix({{2.0, 1.0}, {0.5, 1.0}, {1.0, 1.0}});
    const auto ws = eg_weights(x, 0.05);
    REQUIRE(ws.size() == 3);
    CHECK(ws[0][0] == 0.5);
    CHECK(ws[1][0] == doctest::Approx(eg_step(ws[0], x.row(0), 0.05)[0]).epsilon(1e-15));
    CHECK(ws[2][0] == doctest::Approx(eg_step(ws[1], x.row(1), 0.05)[0]).epsilon(1e-15));
}

TEST_CASE("universal_run examples") {
    const auto solo = PriceRelativeMatrix::from_rows({{1.5}, {0.5}, {3.0}}, {"solo"});
    CHECK(universal_run(solo, {7, 1, {}}).back() == doctest::Approx(2.25).epsilon(1e-15));
    const auto empty = PriceRelativeMatrix::from_rows({}, {"a", "b"});
    CHECK(universal_run(empty, {10, 1, {}}) == std::vector<double>{1.0});
    CHECK_THROWS_AS(universal_run(solo, {0, 1, {}}), Error);
}

TEST_CASE("sample_simplex draws lie on the simplex and depend only on the seed") {
    const auto a = sample_simplex(1000, 4, 9);
    const auto b = sample_simplex(1000, 4, 9);
    const auto c = sample_simplex(1000, 4, 10);
    CHECK(a == b);
    CHECK(a != c);
    // Prefix stability: draw m never depends on the total count.
    const auto head = sample_simplex(10, 4, 9);
    CHECK(std::equal(head.begin(), head.end(), a.begin()));
    double mean0 = 0.0;
    for (std::size_t m = 0; m < 1000; ++m) {
        double s = 0.0;
        for (std::size_t i = 0; i < 4; ++i) {
            CHECK(a[m * 4 + i] >= 0.0);
            s += a[m * 4 + i];
        }
        CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
        mean0 += a[m * 4];
    }
    CHECK(mean0 / 1000 == doctest::Approx(0.25).epsilon(0.1));
}

TEST_CASE("best_stock examples") {
    const auto v = best_stock(synth_volatility_pair(4));
    CHECK(v.index == 0);
    CHECK(v.wealth == doctest::Approx(1.0).epsilon(1e-15));
    const auto x = matrix({{2.0, 0.5}, {0.5, 2.0}});
    CHECK(best_stock(x).index == 0);
    const auto d = matrix({{1.0, 1.2, 0.9}, {1.0, 1.1, 1.3}});
    CHECK(best_stock(d).index == 1);
}

TEST_CASE("property: bcrp dominates sampled CRPs and the best stock") {
    std::mt19937_64 rng(51);
    for (int trial = 0; trial < 25; ++trial) {
        const std::size_t n = 2 + trial % 4, T = 5 + trial % 30;
        const auto x = testsupport::random_matrix(rng, T, n, 0.7, 1.4);
        const auto r = bcrp_solve(x);
        CHECK(r.log2_wealth == doctest::Approx(std::log2(crp_run(r.weights, x).back())).epsilon(1e-12));
        CHECK(r.log2_wealth >= std::log2(best_stock(x).wealth) - 1e-12);
        for (int k = 0; k < 30; ++k) {
            const PortfolioVector w(testsupport::random_simplex(rng, n));
            CHECK(r.log2_wealth >= std::log2(crp_run(w, x).back()) - 1e-12);
        }
    }
}

TEST_CASE("property: eg_step preserves the simplex and ignores row scaling") {
    std::mt19937_64 rng(52);
    std::uniform_real_distribution<double> k(0.01, 100.0);
    for (int trial = 0; trial < 300; ++trial) {
        const std::size_t n = 2 + trial % 5;
        const PortfolioVector w(testsupport::random_simplex(rng, n));
        const auto x = testsupport::random_matrix(rng, 1, n);
        std::vector<double> kx(x.row(0).begin(), x.row(0).end());
        const double s = k(rng);
        for (auto& v : kx) v *= s;
        const auto a = eg_step(w, x.row(0), 0.05 + trial % 3);
        const auto b = eg_step(w, kx, 0.05 + trial % 3);
        const auto ws = a.weights();
        CHECK(std::accumulate(ws.begin(), ws.end(), 0.0) == doctest::Approx(1.0).epsilon(1e-14));
        for (std::size_t i = 0; i < n; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }
}

TEST_CASE("property: universal is deterministic and bracketed") {
    std::mt19937_64 rng(53);
    for (int trial = 0; trial < 10; ++trial) {
        const std::size_t n = 2 + trial % 3;
        const auto x = testsupport::random_matrix(rng, 8, n);
        const UniversalConfig cfg{500, 77u + trial, {}};
        const auto a = universal_run(x, cfg);
        CHECK(a == universal_run(x, cfg));
        const auto samples = sample_simplex(cfg.samples, n, cfg.seed);
        double lo = INFINITY, hi = 0.0;
        for (std::size_t m = 0; m < cfg.samples; ++m) {
            std::vector<double> w(samples.begin() + m * n, samples.begin() + (m + 1) * n);
            const double s = crp_run(normalize_to_simplex(w), x).back();
            lo = std::min(lo, s);
            hi = std::max(hi, s);
        }
        CHECK(a.back() >= lo * (1 - 1e-12));
        CHECK(a.back() <= hi * (1 + 1e-12));
        CHECK(a.back() <= std::exp2(bcrp_solve(x).log2_wealth) * (1 + 1e-12));
    }
}

TEST_CASE("property: sampled-CRP kernel agrees with its serial reference") {
    std::mt19937_64 rng(54);
    const auto x = testsupport::random_matrix(rng, 30, 3);
    for (auto cost : {CostModel::none(), CostModel::per_trade(0.02), CostModel::parallel(0.05)}) {
        const UniversalConfig cfg{5000, 5, cost};
        const auto par = universal_track(x, cfg, false);
        const auto ref = universal_track(x, cfg, true);
        for (std::size_t d = 0; d < par.wealth.size(); ++d)
            CHECK(par.wealth[d] == doctest::Approx(ref.wealth[d]).epsilon(1e-12));
        for (std::size_t k = 0; k < par.allocation.size(); ++k) {
            CHECK(par.allocation[k] == doctest::Approx(ref.allocation[k]).epsilon(1e-12));
            CHECK(par.holdings[k] == doctest::Approx(ref.holdings[k]).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: universal output does not depend on the thread count") {
    std::mt19937_64 rng(55);
    const auto x = testsupport::random_matrix(rng, 20, 2);
    const UniversalConfig cfg{9000, 3, CostModel::parallel(0.02)};
    kernels::set_thread_limit(1);
    const auto one = universal_run(x, cfg);
    kernels::set_thread_limit(4);
    const auto four = universal_run(x, cfg);
    kernels::set_thread_limit(0);
    CHECK(one == four);
}

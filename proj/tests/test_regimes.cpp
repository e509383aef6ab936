#include <algorithm>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "switchfolio/regimes.hpp"
#include "switchfolio/switching.hpp"

using namespace switchfolio;
using testsupport::matrix;

TEST_CASE("prior_fixed examples") {
    const double g = 1.0 / 3.0;
    CHECK(prior_fixed({{}, {0}}, 3, 2, g) == doctest::Approx(2.0 / 9.0).epsilon(1e-15));
    CHECK(prior_fixed({{1}, {0, 1}}, 3, 2, g) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK(prior_fixed({{2}, {1, 0}}, 3, 2, g) == doctest::Approx(1.0 / 9.0).epsilon(1e-15));
    CHECK_THROWS_AS(prior_fixed({{0}, {0, 1}}, 3, 2, g), Error);
}

TEST_CASE("prior_adaptive examples") {
    CHECK(prior_adaptive({{}, {0}}, 2, 2) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(prior_adaptive({{1}, {0, 1}}, 2, 2) == doctest::Approx(0.25).epsilon(1e-15));
    // Stay twice from day 1: (1/N)·(1/2)·(3/4).
    CHECK(prior_adaptive({{}, {1}}, 3, 2) == doctest::Approx(0.5 * 0.5 * 0.75).epsilon(1e-15));
    // N = 3, switch after day 2: (1/3)·(1/2)·(1/4)·(1/2).
    CHECK(prior_adaptive({{2}, {0, 2}}, 3, 3) == doctest::Approx(1.0 / 3.0 * 0.5 * 0.25 * 0.5).epsilon(1e-15));
}

TEST_CASE("regime_wealth examples") {
    const auto x = matrix({{2.0, 0.5}, {0.5, 2.0}});
    CHECK(regime_wealth({{}, {0}}, x) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(regime_wealth({{1}, {0, 1}}, x) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(regime_wealth({{1}, {0, 1}}, x, CostModel::per_trade(0.01), RegimeCharge::all_segments) ==
          doctest::Approx(4.0 * 0.9801 * 0.9801).epsilon(1e-15));
    CHECK(regime_wealth({{1}, {0, 1}}, x, CostModel::per_trade(0.01), RegimeCharge::switches_only) ==
          doctest::Approx(4.0 * 0.9801).epsilon(1e-15));
    CHECK(log2_regime_wealth({{1}, {0, 1}}, x) == doctest::Approx(2.0).epsilon(1e-15));
}

TEST_CASE("enumerate_regimes counts") {
    CHECK(enumerate_regimes(1, 2).size() == 2);
    CHECK(enumerate_regimes(2, 2).size() == 4);
    CHECK(enumerate_regimes(6, 2).size() == 64);
    CHECK(enumerate_regimes(4, 3).size() == 81);
    CHECK(enumerate_regimes(0, 2).empty());
    CHECK(count_regimes(6, 2) == 64.0);
    CHECK_THROWS_AS(enumerate_regimes(30, 3), Error);
    const auto all = enumerate_regimes(5, 3);
    for (const auto& q : all) CHECK_NOTHROW(validate_regime(q, 5, 3));
    for (std::size_t i = 0; i < all.size(); ++i)
        for (std::size_t j = i + 1; j < std::min(all.size(), i + 5); ++j) CHECK_FALSE(all[i] == all[j]);
}

TEST_CASE("mixture_oracle examples") {
    const auto empty = PriceRelativeMatrix::from_rows({}, {"a", "b"});
    CHECK(mixture_oracle(empty, PriorKind::adaptive()) == 1.0);
    const auto x = matrix({{2.0, 0.5}});
    CHECK(mixture_oracle(x, PriorKind::adaptive()) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK(mixture_oracle(x, PriorKind::fixed(0.2)) == doctest::Approx(1.25).epsilon(1e-15));
    CHECK_THROWS_AS(PriorKind::fixed(1.5), Error);
}

TEST_CASE("kt_product examples") {
    CHECK(kt_product(1).value == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(kt_product(1).neg_log2 == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(kt_product(2).value == doctest::Approx(0.375).epsilon(1e-14));
    CHECK(kt_product(4).value == doctest::Approx(105.0 / 384.0).epsilon(1e-14));
    CHECK(kt_product(4).neg_log2 == doctest::Approx(-std::log2(105.0 / 384.0)).epsilon(1e-13));
    CHECK(kt_product(4).neg_log2 <= 2.0);
    CHECK(kt_product(0).value == 1.0);
    // Against a direct product.
    double p = 1.0;
    for (std::size_t i = 0; i < 500; ++i) p *= (i + 0.5) / (i + 1.0);
    CHECK(kt_product(500).value == doctest::Approx(p).epsilon(1e-12));
}

TEST_CASE("kt_g_sequence") {
    const auto g = kt_g_sequence(5);
    REQUIRE(g.size() == 5);
    CHECK(g[0] == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(g[1] == doctest::Approx(std::sqrt(2.0) * 0.375).epsilon(1e-15));
    CHECK(g[4] == doctest::Approx(std::sqrt(5.0) * kt_product(5).value).epsilon(1e-13));
}

TEST_CASE("adaptive penalty examples") {
    CHECK(theorem2_penalty(4, 2, 1) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK(theorem2_penalty(4, 2, 0) == doctest::Approx(4.0).epsilon(1e-15));
    CHECK(theorem2_penalty(16, 2, 2) == doctest::Approx(20.0).epsilon(1e-15));
}

TEST_CASE("fixed_gamma_penalty examples") {
    CHECK(fixed_gamma_penalty(3, 2, 1, 1.0 / 3.0) ==
          doctest::Approx(2.0 + std::log2(3.0) + 2.0 * std::log2(1.5)).epsilon(1e-14));
    CHECK(fixed_gamma_penalty(3, 2, 1, 1.0 / 3.0) == doctest::Approx(4.755).epsilon(1e-4));
    CHECK(fixed_gamma_penalty(10, 2, 0, 1e-9) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("bound_check examples") {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 20; ++trial) {
        const auto x = testsupport::random_matrix(rng, 6, 2);
        AdaptiveState s(2);
        for (std::size_t t = 0; t < 6; ++t) s.step(x.row(t));
        const double alg = s.log_total_wealth() / std::log(2.0);
        double best = -INFINITY;
        RegimeSpec best_q;
        enumerate_regimes(6, 2, [&](const RegimeSpec& q) {
            const double v = log2_regime_wealth(q, x);
            if (v > best) {
                best = v;
                best_q = q;
            }
        });
        const auto r = bound_check(x, PriorKind::adaptive(), alg, best_q);
        CHECK(r.slack >= 0.0);
        CHECK(r.slack == doctest::Approx(alg - (r.regime_log_wealth - r.penalty)).epsilon(1e-14));
    }
    const auto x = matrix({{1.2, 0.7}, {0.9, 1.1}});
    AdaptiveState s(2);
    for (std::size_t t = 0; t < 2; ++t) s.step(x.row(t));
    const auto r = bound_check(x, PriorKind::adaptive(), s.log_total_wealth() / std::log(2.0), {{}, {0}});
    CHECK(r.slack >= 0.0);
    CHECK(std::isfinite(r.slack));
}

TEST_CASE("property: priors sum to one") {
    for (std::size_t n : {2u, 3u}) {
        for (std::size_t T = 1; T <= 8; ++T) {
            for (double g : {0.1, 1.0 / 3.0, 0.45}) {
                double sum = 0.0;
                enumerate_regimes(T, n, [&](const RegimeSpec& q) { sum += prior_fixed(q, T, n, g); });
                CHECK(std::abs(sum - 1.0) <= 1e-12);
            }
            double sum = 0.0;
            enumerate_regimes(T, n, [&](const RegimeSpec& q) { sum += prior_adaptive(q, T, n); });
            CHECK(std::abs(sum - 1.0) <= 1e-12);
        }
    }
}

TEST_CASE("property: exact adaptive prior is dominated by the adaptive penalty") {
    for (std::size_t n : {2u, 3u}) {
        for (std::size_t T = 2; T <= 8; ++T) {
            enumerate_regimes(T, n, [&](const RegimeSpec& q) {
                CHECK(-log2_prior(q, T, n, PriorKind::adaptive()) <= theorem2_penalty(T, n, q.switches()) + 1e-12);
            });
        }
    }
}

TEST_CASE("property: exact fixed prior is dominated by the fixed-gamma penalty") {
    for (std::size_t n : {2u, 3u}) {
        for (std::size_t T = 1; T <= 7; ++T) {
            for (double g : {0.1, 0.3, 0.5}) {
                enumerate_regimes(T, n, [&](const RegimeSpec& q) {
                    CHECK(-log2_prior(q, T, n, PriorKind::fixed(g)) <=
                          fixed_gamma_penalty(T, n, q.switches(), g) + 1e-12);
                });
            }
        }
    }
}

TEST_CASE("property: library oracle equals the path oracle") {
    std::mt19937_64 rng(42);
    for (int trial = 0; trial < 30; ++trial) {
        const std::size_t n = 2 + trial % 2, T = 1 + trial % 7;
        const auto x = testsupport::random_matrix(rng, T, n);
        for (auto cost : {CostModel::none(), CostModel::parallel(0.1)}) {
            const double f = switch_factor(cost);
            CHECK(mixture_oracle(x, PriorKind::fixed(0.3), cost) ==
                  doctest::Approx(testsupport::path_mixture_fixed(x, 0.3, f)).epsilon(1e-12));
            CHECK(mixture_oracle(x, PriorKind::adaptive(), cost) ==
                  doctest::Approx(testsupport::path_mixture_adaptive(x, f)).epsilon(1e-12));
            const double all = testsupport::path_mixture(
                x, [](std::size_t run) { return 1.0 - 0.5 / (run + 1.0); }, f, true);
            CHECK(mixture_oracle(x, PriorKind::adaptive(), cost, RegimeCharge::all_segments) ==
                  doctest::Approx(all).epsilon(1e-12));
        }
    }
}

TEST_CASE("property: oracle is independent of enumeration order") {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 10; ++trial) {
        const auto x = testsupport::random_matrix(rng, 7, 2);
        auto regimes = enumerate_regimes(7, 2);
        const double forward = mixture_log2_over(regimes, x, PriorKind::adaptive());
        std::shuffle(regimes.begin(), regimes.end(), rng);
        const double shuffled = mixture_log2_over(regimes, x, PriorKind::adaptive());
        CHECK(std::abs(std::exp2(forward) - std::exp2(shuffled)) <= 1e-12 * std::exp2(forward));
        CHECK(forward == doctest::Approx(mixture_oracle_log2(x, PriorKind::adaptive())).epsilon(1e-13));
    }
}

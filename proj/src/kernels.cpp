#include "switchfolio/kernels.hpp"

#include <algorithm>
#include <numeric>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace switchfolio::kernels {

namespace {

constexpr std::size_t kBucketChunk = 4096;
constexpr std::size_t kSampleChunk = 2048;

BucketSums advance_range(double* b, std::size_t begin, std::size_t end, std::size_t oldest_age,
                         const double* survive, const double* hazard, double scale) {
    double total = 0.0, out = 0.0;
    for (std::size_t k = begin; k < end; ++k) {
        const std::size_t age = oldest_age - k;
        const double v = b[k] * (survive[age] * scale);
        b[k] = v;
        total += v;
        out += v * hazard[age + 1];
    }
    return {total, out};
}

}  // namespace

BucketSums advance_buckets_reference(std::span<double> buckets, std::size_t oldest_age,
                                     std::span<const double> survive,
                                     std::span<const double> hazard, double scale) {
    BucketSums sums;
    for (std::size_t k = 0; k < buckets.size(); ++k) {
        const std::size_t age = oldest_age - k;
        buckets[k] *= survive[age] * scale;
        sums.total += buckets[k];
        sums.switch_out += buckets[k] * hazard[age + 1];
    }
    return sums;
}

BucketSums advance_buckets(std::span<double> buckets, std::size_t oldest_age,
                           std::span<const double> survive, std::span<const double> hazard,
                           double scale) {
    const std::size_t n = buckets.size();
    const std::size_t chunks = (n + kBucketChunk - 1) / kBucketChunk;
    if (chunks <= 1)
        return advance_range(buckets.data(), 0, n, oldest_age, survive.data(), hazard.data(), scale);

    std::vector<BucketSums> partial(chunks);
    double* b = buckets.data();
    const double* s = survive.data();
    const double* h = hazard.data();
    const auto count = static_cast<long>(chunks);
#pragma omp parallel for schedule(static)
    for (long c = 0; c < count; ++c) {
        const std::size_t begin = static_cast<std::size_t>(c) * kBucketChunk;
        partial[c] = advance_range(b, begin, std::min(n, begin + kBucketChunk), oldest_age, s, h,
                                   scale);
    }
    BucketSums sums;
    for (const auto& p : partial) {
        sums.total += p.total;
        sums.switch_out += p.switch_out;
    }
    return sums;
}

void crp_series(std::span<const double> weights, const PriceRelativeMatrix& x,
                const CostModel& cost, std::span<double> out) {
    const std::size_t n = x.assets();
    out[0] = 1.0;
    if (!cost.active()) {
        double wealth = 1.0;
        for (std::size_t t = 0; t < x.days(); ++t) {
            const auto row = x.row(t);
            double r = 0.0;
            for (std::size_t i = 0; i < n; ++i) r += weights[i] * row[i];
            wealth *= r;
            out[t + 1] = wealth;
        }
        return;
    }
    std::vector<double> held(n);
    double total = 1.0;
    for (std::size_t t = 0; t < x.days(); ++t) {
        if (t > 0) total = rebalance_total(cost, held, weights);
        const auto row = x.row(t);
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            held[i] = total * weights[i] * row[i];
            sum += held[i];
        }
        out[t + 1] = sum;
    }
}

void CrpAggregate::scale(double factor) {
    for (auto* v : {&wealth, &allocation, &holdings})
        for (auto& e : *v) e *= factor;
}

namespace {

CrpAggregate empty_aggregate(const PriceRelativeMatrix& x) {
    const std::size_t cells = x.days() * x.assets();
    return {std::vector<double>(x.days() + 1, 0.0), std::vector<double>(cells, 0.0),
            std::vector<double>(cells, 0.0)};
}

// Adds one CRP's track into `acc`; `held` is scratch of size N.
void accumulate_crp(std::span<const double> w, const PriceRelativeMatrix& x,
                    const CostModel& cost, std::vector<double>& held, CrpAggregate& acc) {
    const std::size_t n = x.assets();
    double total = 1.0;
    acc.wealth[0] += 1.0;
    for (std::size_t t = 0; t < x.days(); ++t) {
        if (t > 0 && cost.active()) total = rebalance_total(cost, held, w);
        const auto row = x.row(t);
        double* alloc = acc.allocation.data() + t * n;
        double* hold = acc.holdings.data() + t * n;
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double a = total * w[i];
            held[i] = a * row[i];
            alloc[i] += a;
            hold[i] += held[i];
            sum += held[i];
        }
        total = sum;
        acc.wealth[t + 1] += sum;
    }
}

}  // namespace

CrpAggregate mean_crp_reference(std::span<const double> portfolios, std::size_t count,
                                const PriceRelativeMatrix& x, const CostModel& cost) {
    const std::size_t n = x.assets();
    auto acc = empty_aggregate(x);
    std::vector<double> held(n);
    for (std::size_t m = 0; m < count; ++m) accumulate_crp(portfolios.subspan(m * n, n), x, cost, held, acc);
    acc.scale(1.0 / static_cast<double>(count));
    return acc;
}

CrpAggregate mean_crp(std::span<const double> portfolios, std::size_t count,
                      const PriceRelativeMatrix& x, const CostModel& cost) {
    const std::size_t n = x.assets();
    const std::size_t chunks = (count + kSampleChunk - 1) / kSampleChunk;
    std::vector<CrpAggregate> partial(chunks);
    const auto chunk_count = static_cast<long>(chunks);
#pragma omp parallel
    {
        std::vector<double> held(n);
#pragma omp for schedule(dynamic)
        for (long c = 0; c < chunk_count; ++c) {
            const std::size_t begin = static_cast<std::size_t>(c) * kSampleChunk;
            const std::size_t end = std::min(count, begin + kSampleChunk);
            auto acc = empty_aggregate(x);
            for (std::size_t m = begin; m < end; ++m)
                accumulate_crp(portfolios.subspan(m * n, n), x, cost, held, acc);
            partial[static_cast<std::size_t>(c)] = std::move(acc);
        }
    }
    auto total = empty_aggregate(x);
    for (const auto& p : partial) {
        for (std::size_t k = 0; k < total.wealth.size(); ++k) total.wealth[k] += p.wealth[k];
        for (std::size_t k = 0; k < total.allocation.size(); ++k) {
            total.allocation[k] += p.allocation[k];
            total.holdings[k] += p.holdings[k];
        }
    }
    total.scale(1.0 / static_cast<double>(count));
    return total;
}

void set_thread_limit(int threads) {
#ifdef _OPENMP
    static const int default_threads = omp_get_max_threads();
    omp_set_num_threads(threads > 0 ? threads : default_threads);
#else
    (void)threads;
#endif
}

int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace switchfolio::kernels

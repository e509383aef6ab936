#include "switchfolio/costs.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace switchfolio {

CostModel::CostModel(CostKind kind, double rate) : kind_(kind), rate_(rate) {
    if (!(rate >= 0.0 && rate < 0.5)) {
        std::ostringstream os;
        os << "commission rate " << rate << " outside [0, 0.5)";
        throw Error(Errc::invalid_cost, os.str());
    }
    if (kind == CostKind::none) rate_ = 0.0;
}

std::string CostModel::describe() const {
    std::ostringstream os;
    os.precision(17);
    switch (kind_) {
        case CostKind::none: return "none";
        case CostKind::per_trade: os << "per-trade(" << rate_ << ")"; break;
        case CostKind::parallel: os << "parallel(" << rate_ << ")"; break;
    }
    return os.str();
}

CostKind parse_cost_kind(const std::string& text) {
    if (text == "none") return CostKind::none;
    if (text == "per-trade") return CostKind::per_trade;
    if (text == "parallel") return CostKind::parallel;
    throw Error(Errc::invalid_argument, "unknown cost model '" + text + "'");
}

double switch_factor(const CostModel& model) {
    const double c = model.rate();
    switch (model.kind()) {
        case CostKind::none: return 1.0;
        case CostKind::per_trade: return (1.0 - c) * (1.0 - c);
        case CostKind::parallel: return 1.0 - 2.0 * c;
    }
    return 1.0;
}

double rebalance_cost(const CostModel& model, std::span<const double> current,
                      std::span<const double> target) {
    if (current.size() != target.size())
        throw Error(Errc::dimension_mismatch, "allocations differ in size");
    double moved = 0.0;
    for (std::size_t i = 0; i < current.size(); ++i) {
        if (current[i] < 0.0 || target[i] < 0.0)
            throw Error(Errc::negative_allocation, "allocations must be nonnegative");
        moved += std::abs(current[i] - target[i]);
    }
    return model.kind() == CostKind::none ? 0.0 : model.rate() * moved;
}

namespace {

// Self-financing total W for proportional commissions: proceeds of the sells,
// (1−c)·Σ max(a_i − w_i W, 0), pay for the buys, Σ max(w_i W − a_i, 0)/(1−c).
// The balance is piecewise linear and decreasing in W, so walk the breakpoints
// a_i/w_i in order and solve on the segment where it changes sign.
double per_trade_total(double c, std::span<const double> held, std::span<const double> target) {
    const double keep = 1.0 - c;
    const std::size_t n = held.size();
    struct Point {
        double at;
        std::size_t i;
    };
    std::vector<Point> points;
    double sell_amount = 0.0;  // Σ a_i over assets still above target
    double sell_weight = 0.0;  // Σ w_i over the same assets
    for (std::size_t i = 0; i < n; ++i) {
        sell_amount += held[i];
        sell_weight += target[i];
        if (target[i] > 0.0) points.push_back({held[i] / target[i], i});
    }
    std::sort(points.begin(), points.end(),
              [](const Point& a, const Point& b) { return a.at < b.at; });
    double buy_amount = 0.0, buy_weight = 0.0;
    double lo = 0.0;
    for (std::size_t k = 0;; ++k) {
        const double hi = k < points.size() ? points[k].at : INFINITY;
        const double num = keep * sell_amount + buy_amount / keep;
        const double den = keep * sell_weight + buy_weight / keep;
        if (den > 0.0) {
            const double w = num / den;
            if (w >= lo && w <= hi) return w;
        }
        if (k == points.size()) break;
        const auto i = points[k].i;
        sell_amount -= held[i];
        sell_weight -= target[i];
        buy_amount += held[i];
        buy_weight += target[i];
        lo = hi;
    }
    return lo;
}

}  // namespace

double rebalance_total(const CostModel& model, std::span<const double> held,
                       std::span<const double> target) {
    if (held.size() != target.size())
        throw Error(Errc::dimension_mismatch, "allocations differ in size");
    const double total = std::accumulate(held.begin(), held.end(), 0.0);
    if (!model.active()) return total;
    if (model.kind() == CostKind::parallel) {
        double moved = 0.0;
        for (std::size_t i = 0; i < held.size(); ++i) moved += std::abs(held[i] - target[i] * total);
        return total - model.rate() * moved;
    }
    return per_trade_total(model.rate(), held, target);
}

RealizedTrack realized_track(const std::vector<PortfolioVector>& weights,
                             const PriceRelativeMatrix& x, const CostModel& model) {
    if (weights.size() != x.days())
        throw Error(Errc::dimension_mismatch, "need one weight vector per day");
    const std::size_t n = x.assets();
    RealizedTrack track{std::vector<double>(x.days() + 1, 1.0), std::vector<double>(x.days(), 1.0)};
    std::vector<double> held(n);
    double total = 1.0;
    for (std::size_t t = 0; t < x.days(); ++t) {
        const auto& w = weights[t];
        if (w.size() != n) throw Error(Errc::dimension_mismatch, "weight vector size");
        if (t > 0) {
            total = rebalance_total(model, held, w.weights());
            track.retained[t] = total / track.wealth[t];
        }
        const auto row = x.row(t);
        for (std::size_t i = 0; i < n; ++i) held[i] = total * w[i] * row[i];
        track.wealth[t + 1] = std::accumulate(held.begin(), held.end(), 0.0);
    }
    return track;
}

std::vector<double> realized_wealth_track(const std::vector<PortfolioVector>& weights,
                                          const PriceRelativeMatrix& x, const CostModel& model) {
    return realized_track(weights, x, model).wealth;
}

}  // namespace switchfolio

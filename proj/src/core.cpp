#include "switchfolio/core.hpp"

#include <cmath>
#include <numeric>
#include <set>
#include <sstream>

namespace switchfolio {

const char* to_string(Errc code) {
    switch (code) {
        case Errc::non_positive_relative: return "NonPositiveRelative";
        case Errc::ragged_rows: return "RaggedRows";
        case Errc::duplicate_asset_name: return "DuplicateAssetName";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::all_zero: return "AllZero";
        case Errc::negative_entry: return "NegativeEntry";
        case Errc::not_on_simplex: return "NotOnSimplex";
        case Errc::gamma_out_of_range: return "GammaOutOfRange";
        case Errc::too_few_assets: return "TooFewAssets";
        case Errc::invalid_regime: return "InvalidRegime";
        case Errc::instance_too_large: return "InstanceTooLarge";
        case Errc::no_data: return "NoData";
        case Errc::negative_allocation: return "NegativeAllocation";
        case Errc::invalid_cost: return "InvalidCost";
        case Errc::parse_error: return "ParseError";
        case Errc::empty_file: return "EmptyFile";
        case Errc::too_few_rows: return "TooFewRows";
        case Errc::non_positive_price: return "NonPositivePrice";
        case Errc::invalid_argument: return "InvalidArgument";
    }
    return "Unknown";
}

Error::Error(Errc code, const std::string& what, std::optional<std::size_t> row,
             std::optional<std::size_t> column)
    : std::runtime_error(std::string(to_string(code)) + ": " + what),
      code_(code),
      row_(row),
      column_(column) {}

PriceRelativeMatrix PriceRelativeMatrix::from_rows(const std::vector<std::vector<double>>& rows,
                                                   std::vector<std::string> names) {
    if (names.empty()) throw Error(Errc::too_few_assets, "at least one asset is required");
    std::set<std::string> seen;
    for (const auto& name : names) {
        if (!seen.insert(name).second)
            throw Error(Errc::duplicate_asset_name, "asset name '" + name + "' repeated");
    }
    PriceRelativeMatrix m;
    m.days_ = rows.size();
    m.values_.reserve(rows.size() * names.size());
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != names.size()) {
            std::ostringstream os;
            os << "day " << t << " has " << rows[t].size() << " values, expected " << names.size();
            throw Error(Errc::ragged_rows, os.str(), t);
        }
        for (std::size_t i = 0; i < names.size(); ++i) {
            const double v = rows[t][i];
            if (!(v > 0.0) || !std::isfinite(v)) {
                std::ostringstream os;
                os << "relative at day " << t << ", asset " << i << " is " << v;
                throw Error(Errc::non_positive_relative, os.str(), t, i);
            }
            m.values_.push_back(v);
        }
    }
    m.names_ = std::move(names);
    return m;
}

PriceRelativeMatrix PriceRelativeMatrix::prefix(std::size_t days) const {
    PriceRelativeMatrix m;
    m.days_ = std::min(days, days_);
    m.names_ = names_;
    m.values_.assign(values_.begin(), values_.begin() + m.days_ * assets());
    return m;
}

PriceRelativeMatrix PriceRelativeMatrix::select(std::span<const std::size_t> columns) const {
    std::vector<std::string> names;
    for (auto c : columns) {
        if (c >= assets()) throw Error(Errc::dimension_mismatch, "column index out of range");
        names.push_back(names_[c]);
    }
    std::vector<std::vector<double>> rows(days_);
    for (std::size_t t = 0; t < days_; ++t)
        for (auto c : columns) rows[t].push_back((*this)(t, c));
    return from_rows(rows, std::move(names));
}

PriceRelativeMatrix validate_relatives(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> names) {
    return PriceRelativeMatrix::from_rows(rows, std::move(names));
}

PortfolioVector::PortfolioVector(std::vector<double> weights) : weights_(std::move(weights)) {
    if (weights_.empty()) throw Error(Errc::not_on_simplex, "empty portfolio");
    double sum = 0.0;
    for (double w : weights_) {
        if (!(w >= 0.0)) throw Error(Errc::negative_entry, "portfolio weight is negative");
        sum += w;
    }
    if (std::abs(sum - 1.0) > kSimplexTolerance) {
        std::ostringstream os;
        os.precision(17);
        os << "weights sum to " << sum;
        throw Error(Errc::not_on_simplex, os.str());
    }
}

PortfolioVector PortfolioVector::uniform(std::size_t n) {
    return PortfolioVector(std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

PortfolioVector PortfolioVector::corner(std::size_t n, std::size_t index) {
    std::vector<double> w(n, 0.0);
    w.at(index) = 1.0;
    return PortfolioVector(std::move(w));
}

double daily_return(const PortfolioVector& w, std::span<const double> x) {
    if (w.size() != x.size())
        throw Error(Errc::dimension_mismatch, "portfolio and relatives differ in size");
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * x[i];
    return s;
}

PortfolioVector normalize_to_simplex(std::span<const double> v) {
    double sum = 0.0;
    for (double e : v) {
        if (!(e >= 0.0)) throw Error(Errc::negative_entry, "cannot normalize a negative entry");
        sum += e;
    }
    if (!(sum > 0.0)) throw Error(Errc::all_zero, "cannot normalize an all-zero vector");
    std::vector<double> w(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) w[i] = v[i] / sum;
    // Division leaves at most a few ulps of drift from 1.
    return PortfolioVector(std::move(w));
}

void validate_regime(const RegimeSpec& regime, std::size_t days, std::size_t assets) {
    auto fail = [](const std::string& why) { throw Error(Errc::invalid_regime, why); };
    if (days == 0) fail("regimes need at least one day");
    if (regime.strategies.size() != regime.switch_times.size() + 1)
        fail("strategies must have one more entry than switch times");
    for (std::size_t j = 0; j < regime.switch_times.size(); ++j) {
        const auto t = regime.switch_times[j];
        if (t < 1 || t > days - 1) fail("switch time outside [1, T-1]");
        if (j > 0 && t <= regime.switch_times[j - 1]) fail("switch times must increase");
    }
    for (std::size_t j = 0; j < regime.strategies.size(); ++j) {
        if (regime.strategies[j] >= assets) fail("strategy index out of range");
        if (j > 0 && regime.strategies[j] == regime.strategies[j - 1])
            fail("adjacent strategies must differ");
    }
}

std::size_t argmax_lowest(std::span<const double> v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

}  // namespace switchfolio

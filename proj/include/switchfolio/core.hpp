#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace switchfolio {

enum class Errc {
    non_positive_relative,
    ragged_rows,
    duplicate_asset_name,
    dimension_mismatch,
    all_zero,
    negative_entry,
    not_on_simplex,
    gamma_out_of_range,
    too_few_assets,
    invalid_regime,
    instance_too_large,
    no_data,
    negative_allocation,
    invalid_cost,
    parse_error,
    empty_file,
    too_few_rows,
    non_positive_price,
    invalid_argument,
};

const char* to_string(Errc code);

/// Library error. `row`/`column` carry a location when the error refers to a
/// cell of a grid or file (0-based grid indices, 1-based file positions).
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what,
          std::optional<std::size_t> row = std::nullopt,
          std::optional<std::size_t> column = std::nullopt);

    Errc code() const noexcept { return code_; }
    std::optional<std::size_t> row() const noexcept { return row_; }
    std::optional<std::size_t> column() const noexcept { return column_; }

private:
    Errc code_;
    std::optional<std::size_t> row_;
    std::optional<std::size_t> column_;
};

inline constexpr double kSimplexTolerance = 1e-12;

/// T×N grid of strictly positive price relatives, row-major by day.
/// Row t (0-based) holds the relatives of trading day t+1.
class PriceRelativeMatrix {
public:
    PriceRelativeMatrix() = default;

    /// Validates and builds. Throws Error{ragged_rows, non_positive_relative,
    /// duplicate_asset_name, too_few_assets}.
    static PriceRelativeMatrix from_rows(const std::vector<std::vector<double>>& rows,
                                         std::vector<std::string> names);

    std::size_t days() const noexcept { return days_; }
    std::size_t assets() const noexcept { return names_.size(); }
    const std::vector<std::string>& asset_names() const noexcept { return names_; }

    std::span<const double> row(std::size_t day) const {
        return {values_.data() + day * assets(), assets()};
    }
    double operator()(std::size_t day, std::size_t asset) const {
        return values_[day * assets() + asset];
    }

    /// First `days` rows; used for prefix-consistency checks.
    PriceRelativeMatrix prefix(std::size_t days) const;
    /// Copy keeping only the listed columns.
    PriceRelativeMatrix select(std::span<const std::size_t> columns) const;

private:
    std::size_t days_ = 0;
    std::vector<std::string> names_;
    std::vector<double> values_;
};

/// Same as PriceRelativeMatrix::from_rows.
PriceRelativeMatrix validate_relatives(const std::vector<std::vector<double>>& rows,
                                       std::vector<std::string> names);

/// Point on the probability simplex.
class PortfolioVector {
public:
    PortfolioVector() = default;
    /// Throws Error{negative_entry, not_on_simplex} when `weights` is farther
    /// than kSimplexTolerance from the simplex.
    explicit PortfolioVector(std::vector<double> weights);

    static PortfolioVector uniform(std::size_t n);
    static PortfolioVector corner(std::size_t n, std::size_t index);

    std::size_t size() const noexcept { return weights_.size(); }
    double operator[](std::size_t i) const { return weights_[i]; }
    std::span<const double> weights() const noexcept { return weights_; }

private:
    std::vector<double> weights_;
};

double daily_return(const PortfolioVector& w, std::span<const double> x);

PortfolioVector normalize_to_simplex(std::span<const double> v);

/// Switching regime over days 1..T. `switch_times[j]` is the day after which
/// the (j+1)-th switch happens; `strategies` holds the asset held per segment.
struct RegimeSpec {
    std::vector<std::size_t> switch_times;
    std::vector<std::size_t> strategies;

    std::size_t switches() const noexcept { return switch_times.size(); }
    bool operator==(const RegimeSpec&) const = default;
};

/// Throws Error{invalid_regime} unless `regime` is valid for `days` and `assets`.
void validate_regime(const RegimeSpec& regime, std::size_t days, std::size_t assets);

/// Index of the largest entry; ties go to the lowest index.
std::size_t argmax_lowest(std::span<const double> v);

}  // namespace switchfolio

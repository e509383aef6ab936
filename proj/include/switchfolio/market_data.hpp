#pragma once

#include <filesystem>
#include <istream>
#include <string>
#include <vector>

#include "switchfolio/core.hpp"

namespace switchfolio {

enum class SeriesMode { relatives, prices };

SeriesMode parse_series_mode(const std::string& text);

/// A loaded CSV. `dates` is empty unless the first header cell is `date`.
/// In prices mode each relative row t is labelled with the date of price row t.
struct MarketData {
    PriceRelativeMatrix relatives;
    std::vector<std::string> dates;
};

/// Comma-separated, header row required; an optional first column named
/// `date` is carried through as text. Parse failures throw
/// Error{parse_error} with 1-based line and column.
MarketData read_csv(std::istream& in, SeriesMode mode);
MarketData load_csv(const std::filesystem::path& path, SeriesMode mode);

/// Row t of the result is price[t+1] / price[t]. Throws Error{too_few_rows,
/// non_positive_price}.
PriceRelativeMatrix prices_to_relatives(const std::vector<std::vector<double>>& prices,
                                        std::vector<std::string> names);

/// Writes the matrix as CSV with 17 significant digits so it reads back
/// bit-exactly.
std::string to_csv(const PriceRelativeMatrix& x, const std::vector<std::string>& dates = {});

/// Two assets over 2n days: a cash-like asset at 1 and a volatile one that
/// halves on odd days and doubles on even days.
PriceRelativeMatrix synth_volatility_pair(std::size_t n);

/// Two assets over 2n days: asset 1 gains 3/2 for n days then loses to 1/4
/// for n days; asset 2 mirrors it.
PriceRelativeMatrix synth_regime_pair(std::size_t n);

/// Formats a double with 17 significant digits.
std::string format_double(double v);

}  // namespace switchfolio

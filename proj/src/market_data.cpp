#include "switchfolio/market_data.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace switchfolio {

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream is(line);
    while (std::getline(is, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

std::string trim(std::string s) {
    const auto b = s.find_first_not_of(" \t\r");
    const auto e = s.find_last_not_of(" \t\r");
    return b == std::string::npos ? std::string{} : s.substr(b, e - b + 1);
}

double parse_cell(const std::string& text, std::size_t line, std::size_t column) {
    double v = 0.0;
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (!text.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (text.empty() || ec != std::errc{} || ptr != last || !std::isfinite(v)) {
        std::ostringstream os;
        os << "line " << line << ", column " << column << ": '" << text << "' is not a number";
        throw Error(Errc::parse_error, os.str(), line, column);
    }
    return v;
}

}  // namespace

SeriesMode parse_series_mode(const std::string& text) {
    if (text == "relatives") return SeriesMode::relatives;
    if (text == "prices") return SeriesMode::prices;
    throw Error(Errc::invalid_argument, "unknown series mode '" + text + "'");
}

MarketData read_csv(std::istream& in, SeriesMode mode) {
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (!line.empty()) {
            header = split_line(line);
            break;
        }
    }
    if (header.empty()) throw Error(Errc::empty_file, "no header row");
    for (auto& h : header) h = trim(h);
    const bool dated = header.front() == "date";
    const std::size_t first_value = dated ? 1 : 0;
    std::vector<std::string> names(header.begin() + static_cast<long>(first_value), header.end());
    if (names.empty()) throw Error(Errc::parse_error, "header names no assets", line_no, 1);

    std::vector<std::vector<double>> rows;
    std::vector<std::string> dates;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        auto cells = split_line(line);
        if (cells.size() != header.size()) {
            std::ostringstream os;
            os << "line " << line_no << " has " << cells.size() << " cells, header has "
               << header.size();
            throw Error(Errc::parse_error, os.str(), line_no, std::min(cells.size(), header.size()) + 1);
        }
        if (dated) dates.push_back(trim(cells[0]));
        std::vector<double> row;
        for (std::size_t c = first_value; c < cells.size(); ++c) {
            const double v = parse_cell(trim(cells[c]), line_no, c + 1);
            if (!(v > 0.0)) {
                std::ostringstream os;
                os << "line " << line_no << ", column " << c + 1 << ": value " << v
                   << " must be positive";
                throw Error(mode == SeriesMode::prices ? Errc::non_positive_price
                                                       : Errc::non_positive_relative,
                            os.str(), line_no, c + 1);
            }
            row.push_back(v);
        }
        rows.push_back(std::move(row));
    }

    MarketData data;
    if (mode == SeriesMode::relatives) {
        data.relatives = PriceRelativeMatrix::from_rows(rows, std::move(names));
        data.dates = std::move(dates);
    } else {
        if (rows.empty()) throw Error(Errc::empty_file, "no price rows");
        data.relatives = prices_to_relatives(rows, std::move(names));
        if (!dates.empty()) dates.pop_back();
        data.dates = std::move(dates);
    }
    return data;
}

MarketData load_csv(const std::filesystem::path& path, SeriesMode mode) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::empty_file, "cannot open '" + path.string() + "'");
    return read_csv(in, mode);
}

PriceRelativeMatrix prices_to_relatives(const std::vector<std::vector<double>>& prices,
                                        std::vector<std::string> names) {
    if (prices.size() < 2) throw Error(Errc::too_few_rows, "need at least two price rows");
    for (std::size_t t = 0; t < prices.size(); ++t) {
        if (prices[t].size() != names.size())
            throw Error(Errc::ragged_rows, "price row has the wrong number of values", t);
        for (std::size_t i = 0; i < names.size(); ++i)
            if (!(prices[t][i] > 0.0))
                throw Error(Errc::non_positive_price, "prices must be positive", t, i);
    }
    std::vector<std::vector<double>> rows(prices.size() - 1, std::vector<double>(names.size()));
    for (std::size_t t = 0; t + 1 < prices.size(); ++t)
        for (std::size_t i = 0; i < names.size(); ++i) rows[t][i] = prices[t + 1][i] / prices[t][i];
    return PriceRelativeMatrix::from_rows(rows, std::move(names));
}

std::string format_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string to_csv(const PriceRelativeMatrix& x, const std::vector<std::string>& dates) {
    const bool dated = !dates.empty();
    if (dated && dates.size() != x.days())
        throw Error(Errc::dimension_mismatch, "need one date per day");
    std::string out;
    if (dated) out += "date,";
    for (std::size_t i = 0; i < x.assets(); ++i) {
        if (i) out += ',';
        out += x.asset_names()[i];
    }
    out += '\n';
    for (std::size_t t = 0; t < x.days(); ++t) {
        if (dated) out += dates[t] + ',';
        for (std::size_t i = 0; i < x.assets(); ++i) {
            if (i) out += ',';
            out += format_double(x(t, i));
        }
        out += '\n';
    }
    return out;
}

PriceRelativeMatrix synth_volatility_pair(std::size_t n) {
    if (n == 0) throw Error(Errc::invalid_argument, "n must be at least 1");
    std::vector<std::vector<double>> rows;
    rows.reserve(2 * n);
    for (std::size_t day = 1; day <= 2 * n; ++day) rows.push_back({1.0, day % 2 == 1 ? 0.5 : 2.0});
    return PriceRelativeMatrix::from_rows(rows, {"steady", "volatile"});
}

PriceRelativeMatrix synth_regime_pair(std::size_t n) {
    if (n == 0) throw Error(Errc::invalid_argument, "n must be at least 1");
    std::vector<std::vector<double>> rows;
    rows.reserve(2 * n);
    for (std::size_t day = 1; day <= 2 * n; ++day)
        rows.push_back(day <= n ? std::vector<double>{1.5, 0.25} : std::vector<double>{0.25, 1.5});
    return PriceRelativeMatrix::from_rows(rows, {"early", "late"});
}

}  // namespace switchfolio

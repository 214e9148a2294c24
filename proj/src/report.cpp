#include "nlab/report.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlab/errors.hpp"
#include "nlab/io.hpp"

namespace nlab {

void StudyReport::add_row(std::vector<double> row) {
    if (row.size() != columns.size()) throw NumericalFailure("row width does not match the report columns");
    rows.push_back(std::move(row));
}

std::size_t StudyReport::column_index(std::string_view n) const {
    const auto it = std::find(columns.begin(), columns.end(), n);
    if (it == columns.end()) throw ConfigError("unknown report column: " + std::string(n));
    return static_cast<std::size_t>(it - columns.begin());
}

std::vector<double> StudyReport::column(std::string_view n) const {
    const std::size_t k = column_index(n);
    std::vector<double> out;
    out.reserve(rows.size());
    for (const auto& r : rows) out.push_back(r[k]);
    return out;
}

std::string StudyReport::to_csv() const {
    std::string out;
    for (std::size_t i = 0; i < columns.size(); ++i) out += (i ? "," : "") + columns[i];
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out += (i ? "," : "") + format_double(r[i]);
        out += '\n';
    }
    return out;
}

std::string StudyReport::to_dat(std::span<const std::string> selected) const {
    std::vector<std::size_t> idx;
    std::string out = "#";
    for (const auto& c : selected) {
        idx.push_back(column_index(c));
        out += ' ' + c;
    }
    out += '\n';
    for (const auto& r : rows) {
        for (std::size_t i = 0; i < idx.size(); ++i) out += (i ? " " : "") + format_double(r[idx[i]]);
        out += '\n';
    }
    return out;
}

nlohmann::json number_to_json(double v) {
    if (std::isfinite(v)) return v;
    return format_double(v);
}

double number_from_json(const nlohmann::json& j) {
    if (j.is_number()) return j.get<double>();
    if (j.is_string()) {
        const auto s = j.get<std::string>();
        if (s == "inf") return std::numeric_limits<double>::infinity();
        if (s == "-inf") return -std::numeric_limits<double>::infinity();
        if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    }
    throw ConfigError("expected a number");
}

nlohmann::json StudyReport::to_json() const {
    nlohmann::json rs = nlohmann::json::array();
    for (const auto& r : rows) {
        nlohmann::json row = nlohmann::json::array();
        for (double v : r) row.push_back(number_to_json(v));
        rs.push_back(std::move(row));
    }
    return {{"name", name},   {"anchor", anchor},   {"parameters", parameters}, {"grid", grid},
            {"summary", summary}, {"columns", columns}, {"rows", std::move(rs)}};
}

StudyReport StudyReport::from_json(const nlohmann::json& j) {
    try {
        StudyReport r;
        r.name = j.at("name").get<std::string>();
        r.anchor = j.at("anchor").get<std::string>();
        r.parameters = j.at("parameters");
        r.grid = j.at("grid");
        r.summary = j.at("summary");
        r.columns = j.at("columns").get<std::vector<std::string>>();
        for (const auto& row : j.at("rows")) {
            std::vector<double> v;
            for (const auto& x : row) v.push_back(number_from_json(x));
            r.add_row(std::move(v));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed report: ") + e.what());
    }
}

bool StudyReport::operator==(const StudyReport& o) const {
    if (name != o.name || anchor != o.anchor || parameters != o.parameters || grid != o.grid ||
        summary != o.summary || columns != o.columns || rows.size() != o.rows.size())
        return false;
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t k = 0; k < rows[i].size(); ++k) {
            const double a = rows[i][k], b = o.rows[i][k];
            if (!(a == b || (std::isnan(a) && std::isnan(b)))) return false;
        }
    return true;
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw NumericalFailure("slope needs at least two points");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

double extrapolate_to_zero(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.empty()) throw NumericalFailure("extrapolation needs matching points");
    std::vector<double> p(y.begin(), y.end());
    const std::size_t n = p.size();
    for (std::size_t m = 1; m < n; ++m)
        for (std::size_t i = 0; i + m < n; ++i) p[i] = (x[i + m] * p[i] - x[i] * p[i + 1]) / (x[i + m] - x[i]);
    return p[0];
}

double relative_spread(std::span<const double> v) {
    if (v.empty()) return 0.0;
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    return *hi / *lo - 1.0;
}

}  // namespace nlab

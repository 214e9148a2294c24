#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace nlab {

// Table of a parameter sweep plus its metadata. Non-finite cells serialize as
// "inf", "-inf" or "nan".
struct StudyReport {
    std::string name;
    std::string anchor;
    nlohmann::json parameters = nlohmann::json::object();
    nlohmann::json grid = nlohmann::json::object();
    nlohmann::json summary = nlohmann::json::object();
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void add_row(std::vector<double> row);
    std::vector<double> column(std::string_view name) const;
    std::size_t column_index(std::string_view name) const;

    std::string to_csv() const;
    // Whitespace-separated series with a commented header.
    std::string to_dat(std::span<const std::string> selected) const;
    nlohmann::json to_json() const;
    static StudyReport from_json(const nlohmann::json& j);

    bool operator==(const StudyReport&) const;
};

nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Value at x = 0 of the interpolating polynomial through the points.
double extrapolate_to_zero(std::span<const double> x, std::span<const double> y);

// max / min - 1 over positive values.
double relative_spread(std::span<const double> v);

}  // namespace nlab

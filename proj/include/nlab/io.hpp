#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "nlab/grid.hpp"
#include "nlab/nonlocal.hpp"

namespace nlab {

// {dim, half_width, cells_per_axis, values}
nlohmann::json grid_to_json(const GridFunction& u);
GridFunction grid_from_json(const nlohmann::json& j);

// {value: number | "divergent"}
nlohmann::json energy_to_json(const EnergyValue& e);
EnergyValue energy_from_json(const nlohmann::json& j);

// Writes through a temporary file in the same directory and renames it.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

// Shortest round-trip decimal representation.
std::string format_double(double v);

}  // namespace nlab

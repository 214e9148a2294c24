#include "nlab/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <system_error>

#include <unistd.h>

#include "nlab/errors.hpp"

namespace nlab {

nlohmann::json grid_to_json(const GridFunction& u) {
    const GridSpec& g = u.spec();
    return {{"dim", g.dim()},
            {"half_width", g.half_width()},
            {"cells_per_axis", g.cells_per_axis()},
            {"values", std::vector<double>(u.values().begin(), u.values().end())}};
}

GridFunction grid_from_json(const nlohmann::json& j) {
    try {
        const GridSpec spec(j.at("dim").get<int>(), j.at("half_width").get<double>(),
                            j.at("cells_per_axis").get<int>());
        return GridFunction(spec, j.at("values").get<std::vector<double>>());
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("malformed grid function: ") + e.what());
    }
}

nlohmann::json energy_to_json(const EnergyValue& e) {
    if (e.is_divergent()) return {{"value", "divergent"}};
    return {{"value", e.value()}};
}

EnergyValue energy_from_json(const nlohmann::json& j) {
    const auto& v = j.at("value");
    if (v.is_string()) {
        if (v.get<std::string>() != "divergent") throw ConfigError("energy value string must be \"divergent\"");
        return EnergyValue::divergent();
    }
    return EnergyValue::finite(v.get<double>());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    const auto dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    std::filesystem::create_directories(dir);
    const auto tmp = dir / ("." + path.filename().string() + ".tmp" + std::to_string(::getpid()));
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
        out << contents;
        out.flush();
        if (!out) throw std::runtime_error("write failed for " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw std::runtime_error("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

}  // namespace nlab

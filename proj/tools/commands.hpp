#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace nlab::cli {

// A tunable parameter of a command. The type of `fallback` fixes the type
// accepted from the command line and from config files.
struct Param {
    std::string key;
    nlohmann::json fallback;
    std::string help;
};

struct OutputFile {
    std::string name;
    std::string contents;
};

struct Outputs {
    std::vector<OutputFile> files;
    nlohmann::json grid = nlohmann::json::object();
};

struct RunConfig {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::filesystem::path out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 0;
};

struct Command {
    std::string name;
    std::string description;
    std::string anchor;
    std::vector<Param> params;
    std::function<Outputs(const RunConfig&)> run;
};

const std::vector<Command>& commands();
const Command& find_command(const std::string& name);

// Converts a command-line string to the type of the fallback value.
nlohmann::json parse_value(const Param& param, const std::string& text);

// defaults <- config file <- command line. Unknown keys and type mismatches
// raise ConfigError.
nlohmann::json merge_parameters(const Command& cmd, const nlohmann::json& from_config,
                                const nlohmann::json& from_cli);

// Accepts either a manifest / run file ({command, parameters, seed}) or a
// flat parameter object.
struct ConfigFile {
    std::string command;
    nlohmann::json parameters = nlohmann::json::object();
    std::optional<std::uint64_t> seed;
};
ConfigFile load_config(const std::filesystem::path& path);

// Runs the command, writes its files and manifest.json into out_dir.
std::vector<std::filesystem::path> execute(const RunConfig& config);

// 0 success, 2 invalid config, 3 guard violation, 4 numerical failure.
int exit_code_for_current_exception() noexcept;

}  // namespace nlab::cli

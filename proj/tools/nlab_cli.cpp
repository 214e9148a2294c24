#include <iostream>
#include <map>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "nlab/errors.hpp"

namespace {

std::string dashed(std::string key) {
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

}  // namespace

int main(int argc, char** argv) {
    using namespace nlab::cli;
    CLI::App app{"Polarization and nonlocal energy experiments"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 1;
    int threads = 0;
    auto* config_opt = app.add_option("--config", config_path, "JSON config or manifest of a previous run");
    app.add_option("--out", out_dir, "output directory");
    auto* seed_opt = app.add_option("--seed", seed, "random seed");
    app.add_option("--threads", threads, "worker threads (0 = hardware)");

    std::map<std::string, std::map<std::string, std::string>> raw;
    std::map<std::string, CLI::App*> subs;
    for (const auto& cmd : commands()) {
        CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
        subs[cmd.name] = sub;
        auto& slot = raw[cmd.name];
        for (const auto& p : cmd.params) sub->add_option("--" + dashed(p.key), slot[p.key], p.help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        const Command* chosen = nullptr;
        for (const auto& cmd : commands())
            if (subs[cmd.name]->parsed()) chosen = &cmd;
        nlohmann::json from_cli = nlohmann::json::object();
        for (const auto& p : chosen->params)
            if (subs[chosen->name]->get_option("--" + dashed(p.key))->count() > 0)
                from_cli[p.key] = parse_value(p, raw[chosen->name][p.key]);

        RunConfig rc;
        rc.command = chosen->name;
        rc.out_dir = out_dir;
        rc.threads = threads;
        nlohmann::json from_config = nlohmann::json::object();
        if (config_opt->count() > 0) {
            const ConfigFile cf = load_config(config_path);
            if (!cf.command.empty() && cf.command != chosen->name)
                throw nlab::ConfigError("config is for command " + cf.command);
            from_config = cf.parameters;
            if (cf.seed) rc.seed = *cf.seed;
        }
        if (seed_opt->count() > 0) rc.seed = seed;
        rc.parameters = merge_parameters(*chosen, from_config, from_cli);
        for (const auto& path : execute(rc)) std::cout << path.string() << '\n';
        return 0;
    } catch (...) {
        return exit_code_for_current_exception();
    }
}

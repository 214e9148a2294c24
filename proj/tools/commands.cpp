#include "commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>

#include "nlab/errors.hpp"
#include "nlab/experiments.hpp"
#include "nlab/io.hpp"
#include "nlab/nonlocal.hpp"
#include "nlab/parallel.hpp"
#include "nlab/profiles.hpp"
#include "nlab/riesz.hpp"
#include "nlab/suite.hpp"

namespace nlab::cli {
namespace {

using json = nlohmann::json;

std::vector<Param> profile_params(const std::string& profile, int dim, double half_width, int cells) {
    return {{"profile", profile, "gaussian, hat, indicator, power-decay, bump, shifted-bump, two-gaussians"},
            {"dim", dim, "spatial dimension (1 or 2)"},
            {"center", nullptr, "profile center, one entry per axis"},
            {"sigma", 1.0, "gaussian width"},
            {"radius", 1.0, "support radius of hat, indicator and bump"},
            {"height", 1.0, "amplitude"},
            {"beta", 2.0, "power-decay exponent"},
            {"half_width", half_width, "domain is [-L, L]^dim"},
            {"cells", cells, "cells per axis"}};
}

std::vector<Param> concat(std::vector<Param> a, const std::vector<Param>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Point center_of(const json& p, Point fallback) {
    const json& c = p.at("center");
    if (c.is_null()) return fallback;
    const auto v = c.get<std::vector<double>>();
    const auto dim = static_cast<std::size_t>(p.at("dim").get<int>());
    if (v.size() != dim) throw ConfigError("center needs one coordinate per axis");
    return {v[0], dim == 2 ? v[1] : 0.0};
}

Profile make_profile(const json& p) {
    const auto kind = p.at("profile").get<std::string>();
    const int dim = p.at("dim").get<int>();
    const double height = p.at("height").get<double>();
    const double radius = p.at("radius").get<double>();
    if (kind == "gaussian") return gaussian(dim, center_of(p, {0, 0}), p.at("sigma").get<double>(), height);
    if (kind == "hat") return hat(dim, center_of(p, {0, 0}), radius, height);
    if (kind == "indicator") return indicator_ball(dim, center_of(p, {0, 0}), radius, height);
    if (kind == "power-decay") return power_decay(dim, center_of(p, {0, 0}), p.at("beta").get<double>(), height);
    if (kind == "bump") return smooth_bump(dim, center_of(p, {0, 0}), radius, height);
    if (kind == "shifted-bump") {
        Profile f = smooth_bump(dim, center_of(p, {0.9, 0.6}), radius, height);
        f.name = "shifted-bump";
        return f;
    }
    if (kind == "two-gaussians") {
        // exp(-4 (x - 1)^2) + 0.7 exp(-(x + 1)^2) along axis 0
        const Point c = center_of(p, {0, 0});
        Profile f = sum(gaussian(dim, {c[0] + 1.0, c[1]}, std::sqrt(0.125), height),
                        gaussian(dim, {c[0] - 1.0, c[1]}, std::sqrt(0.5), 0.7 * height));
        f.name = "two-gaussians";
        return f;
    }
    throw ConfigError("unknown profile: " + kind);
}

GridSpec grid_of(const json& p) {
    return GridSpec(p.at("dim").get<int>(), p.at("half_width").get<double>(), p.at("cells").get<int>());
}

json grid_json(const GridSpec& g) {
    return {{"dim", g.dim()}, {"half_width", g.half_width()}, {"cells_per_axis", g.cells_per_axis()}, {"h", g.h()}};
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

template <class T>
std::vector<T> list(const json& p, const char* key) {
    return p.at(key).get<std::vector<T>>();
}

void add_report(Outputs& out, const StudyReport& r, const std::string& stem) {
    out.files.push_back({stem + ".csv", r.to_csv()});
    out.files.push_back({stem + ".json", dump(r.to_json())});
}

KernelParams kernel_of(const json& p) {
    return {p.at("p").get<double>(), p.at("delta").get<double>(), p.at("s").get<double>()};
}

YoungFunction young_of(const json& p) {
    const auto kind = p.at("young").get<std::string>();
    const double a = p.at("young_param").get<double>();
    if (kind == "power") return YoungFunction::power(a);
    if (kind == "exp") return YoungFunction::exponential();
    if (kind == "hinge") return YoungFunction::hinge(a);
    throw ConfigError("unknown Young function: " + kind);
}

RadialWeight weight_of(const json& p) {
    const auto kind = p.at("weight").get<std::string>();
    const double a = p.at("weight_param").get<double>();
    if (kind == "gaussian") return RadialWeight::gaussian(a);
    if (kind == "algebraic") return RadialWeight::algebraic(a);
    if (kind == "truncated") return RadialWeight::truncated(a);
    throw ConfigError("unknown radial weight: " + kind);
}

NearField near_of(const json& p) {
    const auto kind = p.at("near_field").get<std::string>();
    if (kind == "auto") return NearField::Auto;
    if (kind == "constant") return NearField::PiecewiseConstant;
    if (kind == "linear") return NearField::LocalLinear;
    throw ConfigError("unknown near-field rule: " + kind);
}

Outputs run_energy(const RunConfig& c) {
    const json& p = c.parameters;
    const auto input = p.at("input").get<std::string>();
    GridFunction u = input.empty() ? sample(grid_of(p), make_profile(p)) : [&] {
        json j;
        try {
            j = json::parse(read_file(input));
        } catch (const json::exception& e) {
            throw ConfigError("cannot parse " + input + ": " + e.what());
        }
        return grid_from_json(j);
    }();
    const auto functional = p.at("functional").get<std::string>();
    json result = {{"functional", functional}};
    if (functional == "idelta") {
        result.update(energy_to_json(i_delta(u, kernel_of(p))));
    } else if (functional == "gagliardo") {
        result.update(energy_to_json(gagliardo_seminorm_p(u, kernel_of(p), near_of(p))));
    } else if (functional == "young") {
        result["value"] = number_to_json(
            young_weight_functional(u, young_of(p), weight_of(p), p.at("weight_refinement").get<int>()));
    } else {
        throw ConfigError("unknown functional: " + functional);
    }
    Outputs out;
    out.grid = grid_json(u.spec());
    out.files.push_back({"energy.json", dump(result)});
    return out;
}

Outputs run_counterexample(const RunConfig& c) {
    const json& p = c.parameters;
    const auto deltas = list<double>(p, "deltas");
    const auto r = counterexample_scan(p.at("p").get<double>(), p.at("epsilon").get<double>(), deltas,
                                       p.at("refinement").get<int>(), p.at("shifted").get<bool>(),
                                       p.at("grid").get<bool>());
    Outputs out;
    out.grid = r.grid;
    add_report(out, r, "counterexample");
    const std::vector<std::string> series{"delta", "gain", "ramp_loss", "far_loss"};
    out.files.push_back({"terms.dat", r.to_dat(series)});
    if (p.at("region").get<bool>()) {
        const auto rd = list<double>(p, "region_deltas");
        const auto re = list<double>(p, "region_epsilons");
        const auto region =
            positivity_region_scan(p.at("p").get<double>(), rd, re, p.at("region_epsilon_equals_delta").get<bool>());
        add_report(out, region, "positivity");
    }
    return out;
}

Outputs run_limits(const RunConfig& c) {
    const json& p = c.parameters;
    const Profile f = make_profile(p);
    const auto mode = p.at("mode").get<std::string>();
    const double half_width = p.at("half_width").get<double>();
    StudyReport r;
    if (mode == "ng") {
        const double refinement = p.at("refinement").get<double>();
        if (refinement < 8.0) throw GuardViolation("limit studies need h <= delta / 8 (refinement >= 8)");
        r = ng_limit_study(f, half_width, p.at("p").get<double>(), list<double>(p, "deltas"), refinement);
    } else if (mode == "bbm") {
        r = bbm_study(f, half_width, p.at("p").get<double>(), list<double>(p, "s_values"),
                      list<double>(p, "cell_widths"));
    } else {
        throw ConfigError("unknown limit mode: " + mode);
    }
    Outputs out;
    out.grid = r.grid;
    add_report(out, r, "limits");
    return out;
}

Outputs run_polarize(const RunConfig& c) {
    const json& p = c.parameters;
    const GridSpec g = grid_of(p);
    const GridFunction u0 = sample(g, make_profile(p));
    const HalfSpaceSchedule schedule(g, c.seed);
    const auto r = polarization_convergence_study(u0, schedule, p.at("steps").get<std::size_t>(),
                                                  p.at("norm_p").get<double>());
    Outputs out;
    out.grid = grid_json(g);
    add_report(out, r, "polarize");
    return out;
}

Outputs run_decay(const RunConfig& c) {
    const json& p = c.parameters;
    const GridSpec g = grid_of(p);
    DecayParams d;
    d.p = p.at("p").get<double>();
    d.lambda = p.at("lambda").get<double>();
    d.theta = number_from_json(p.at("theta"));
    d.deltas = list<double>(p, "deltas");
    const auto r = decay_study(sample(g, make_profile(p)), d);
    Outputs out;
    out.grid = grid_json(g);
    add_report(out, r, "decay");
    return out;
}

Outputs run_riesz(const RunConfig& c) {
    const json& p = c.parameters;
    const auto probe = p.at("probe").get<std::string>();
    const double s = p.at("s").get<double>();
    Outputs out;
    if (probe == "keycond") {
        const auto r = keycond_study(p.at("trials").get<std::size_t>(), p.at("dim").get<int>(),
                                     p.at("cells").get<int>(), s, p.at("p").get<double>(), c.seed,
                                     p.at("rel_tolerance").get<double>());
        out.grid = r.grid;
        add_report(out, r, "keycond");
        if (!r.summary.at("candidates").empty()) out.files.push_back({"candidates.json", dump(r.summary["candidates"])});
    } else if (probe == "field") {
        const GridSpec g = grid_of(p);
        const GridFunction u = sample(g, make_profile(p));
        const auto field = fractional_gradient(u, s);
        const auto jf = j_functional(u, s, p.at("p").get<double>());
        StudyReport r;
        r.name = "riesz-field";
        r.anchor = "fractional gradient D^s u and the Riesz functional J";
        r.parameters = p;
        r.grid = grid_json(g);
        r.columns = {"cell", "x0", "x1", "d0", "d1", "norm", "j"};
        for (std::size_t i = 0; i < u.size(); ++i) {
            const Point x = g.center(i), v = field.at(i);
            r.add_row({static_cast<double>(i), x[0], g.dim() == 2 ? x[1] : 0.0, v[0], g.dim() == 2 ? v[1] : 0.0,
                       field.norm(i), jf[i]});
        }
        out.grid = r.grid;
        add_report(out, r, "riesz_field");
    } else if (probe == "oracle") {
        const auto r = riesz_oracle_study(make_profile(p), p.at("half_width").get<double>(), p.at("cells").get<int>(),
                                          list<double>(p, "s_values"));
        out.grid = r.grid;
        add_report(out, r, "riesz_oracle");
    } else {
        throw ConfigError("unknown riesz probe: " + probe);
    }
    return out;
}

Outputs run_suite(const RunConfig& c) {
    const auto r = inequality_suite(c.parameters.at("trials").get<std::size_t>(), c.seed);
    Outputs out;
    out.grid = {{"kind", "random 1D and 2D grids"}};
    add_report(out, r, "suite");
    return out;
}

std::vector<Command> build_commands() {
    const std::vector<double> ce_deltas{1e-3, 2e-3, 5e-3, 1e-2};
    std::vector<Command> v;
    v.push_back({"energy", "evaluate I_delta, the Gagliardo seminorm or a Young functional",
                 "nonlocal energies I_delta, W^{s,p} seminorm and Young-weight functionals",
                 concat({{"functional", "idelta", "idelta, gagliardo or young"},
                         {"input", "", "grid function JSON; empty samples the profile"},
                         {"p", 2.0, "exponent"},
                         {"delta", 0.1, "level-set threshold"},
                         {"s", 0.5, "fractional order"},
                         {"near_field", "auto", "auto, constant or linear"},
                         {"young", "power", "power, exp or hinge"},
                         {"young_param", 2.0, "power exponent or hinge offset"},
                         {"weight", "gaussian", "gaussian, algebraic or truncated"},
                         {"weight_param", 1.0, "width, decay exponent or radius"},
                         {"weight_refinement", 2, "quadrature points per cell and axis"}},
                        profile_params("gaussian", 1, 4.0, 256)),
                 run_energy});
    v.push_back({"counterexample", "energy gap of the one-dimensional counterexample under polarization",
                 "counterexample: I_delta(u^H) > I_delta(u) for H = [0, inf)",
                 {{"p", 2.0, "exponent"},
                  {"epsilon", 1e-2, "ramp depth parameter"},
                  {"deltas", ce_deltas, "delta values"},
                  {"refinement", 8, "cells per delta"},
                  {"shifted", false, "add 2 eps delta on |x| < 3"},
                  {"grid", true, "also evaluate the grid energies"},
                  {"region", true, "scan the sign of the difference over (delta, epsilon)"},
                  {"region_deltas", std::vector<double>{1e-3, 2e-3, 5e-3, 1e-2, 2e-2, 5e-2}, "scan deltas"},
                  {"region_epsilons", std::vector<double>{1e-2, 5e-2}, "scan epsilons"},
                  {"region_epsilon_equals_delta", true, "also scan epsilon = delta"}},
                 run_counterexample});
    v.push_back({"limits", "Ng and BBM limits of nonlocal energies",
                 "limits of I_delta as delta -> 0 and of (1 - s) W^{s,p} as s -> 1",
                 concat({{"mode", "ng", "ng or bbm"},
                         {"p", 2.0, "exponent"},
                         {"deltas", std::vector<double>{0.1, 0.05, 0.025}, "ng: delta values"},
                         {"refinement", 8.0, "ng: h = delta / refinement"},
                         {"s_values", std::vector<double>{0.9, 0.99, 0.999}, "bbm: s values"},
                         {"cell_widths", std::vector<double>{0.02, 0.01, 0.005}, "bbm: cell width per s"}},
                        profile_params("gaussian", 1, 6.0, 0)),
                 run_limits});
    v.push_back({"polarize", "iterated polarization towards the Schwarz rearrangement",
                 "iterated polarization converges to u* in L^p",
                 concat({{"steps", 200, "number of polarizations"}, {"norm_p", 2.0, "L^p error exponent"}},
                        profile_params("shifted-bump", 2, 3.0, 32)),
                 run_polarize});
    v.push_back({"decay", "level-set measure and pointwise decay of u*",
                 "Lorentz decay bounds for u* from I_delta",
                 concat({{"p", 1.5, "exponent, 1 < p < 2"},
                         {"lambda", 1.0, "level lambda delta"},
                         {"theta", 2.0, "Lorentz index (number or \"inf\")"},
                         {"deltas", std::vector<double>{0.8, 0.4, 0.2, 0.1}, "delta values"}},
                        profile_params("gaussian", 2, 4.0, 96)),
                 run_decay});
    v.push_back({"riesz", "Riesz fractional gradient: field, spectral check, polarization probe",
                 "Riesz fractional gradient and the polarization inequality for J (open problem)",
                 concat({{"probe", "keycond", "keycond, field or oracle"},
                         {"s", 0.5, "fractional order"},
                         {"p", 2.0, "exponent of J"},
                         {"trials", 100, "keycond: random trials"},
                         {"rel_tolerance", 1e-8, "keycond: relative tolerance"},
                         {"s_values", std::vector<double>{0.3, 0.5, 0.7}, "oracle: s values"}},
                        profile_params("gaussian", 1, 8.0, 128)),
                 run_riesz});
    v.push_back({"inequality-suite", "randomized checks of the polarization identities and inequalities",
                 "decomposition identities, two-point inequalities, structural and decay checks",
                 {{"trials", 200, "trials per check"}},
                 run_suite});
    return v;
}

bool non_finite_token(const json& v) {
    if (!v.is_string()) return false;
    const auto& t = v.get_ref<const std::string&>();
    return t == "inf" || t == "-inf" || t == "nan";
}

bool same_type(const json& fallback, const json& v) {
    if (fallback.is_null()) return v.is_null() || v.is_array() || v.is_number();
    if (fallback.is_number_float()) return v.is_number() || non_finite_token(v);
    if (fallback.is_number_integer()) return v.is_number_integer();
    if (fallback.is_boolean()) return v.is_boolean();
    if (fallback.is_string()) return v.is_string();
    if (fallback.is_array()) return v.is_array();
    return false;
}

}  // namespace

const std::vector<Command>& commands() {
    static const std::vector<Command> all = build_commands();
    return all;
}

const Command& find_command(const std::string& name) {
    for (const auto& c : commands())
        if (c.name == name) return c;
    throw ConfigError("unknown command: " + name);
}

json parse_value(const Param& param, const std::string& text) {
    const json& f = param.fallback;
    auto number = [&](const std::string& t) -> json {
        if (t == "inf" || t == "-inf" || t == "nan") return t;
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(t, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != t.size() || t.empty()) throw ConfigError("--" + param.key + ": not a number: " + t);
        return v;
    };
    auto split = [&](const std::string& t) {
        json a = json::array();
        std::size_t start = 0;
        while (start <= t.size()) {
            const std::size_t end = std::min(t.find(',', start), t.size());
            a.push_back(number(t.substr(start, end - start)));
            start = end + 1;
        }
        return a;
    };
    if (f.is_string()) return text;
    if (f.is_boolean()) {
        if (text == "true" || text == "1") return true;
        if (text == "false" || text == "0") return false;
        throw ConfigError("--" + param.key + ": expected true or false");
    }
    if (f.is_number_integer()) {
        std::size_t used = 0;
        long long v = 0;
        try {
            v = std::stoll(text, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != text.size() || text.empty()) throw ConfigError("--" + param.key + ": not an integer: " + text);
        return v;
    }
    if (f.is_number_float()) return number(text);
    return split(text);
}

json merge_parameters(const Command& cmd, const json& from_config, const json& from_cli) {
    json out = json::object();
    for (const auto& p : cmd.params) out[p.key] = p.fallback;
    for (const json* src : {&from_config, &from_cli}) {
        if (!src->is_object()) throw ConfigError("parameters must be a JSON object");
        for (const auto& [k, v] : src->items()) {
            const auto it = std::find_if(cmd.params.begin(), cmd.params.end(), [&](const Param& p) { return p.key == k; });
            if (it == cmd.params.end()) throw ConfigError("unknown parameter for " + cmd.name + ": " + k);
            if (!same_type(it->fallback, v)) throw ConfigError("parameter " + k + " has the wrong type");
            out[k] = it->fallback.is_number_float() && v.is_number() ? json(v.get<double>()) : v;
        }
    }
    return out;
}

ConfigFile load_config(const std::filesystem::path& path) {
    json j;
    try {
        j = json::parse(read_file(path));
    } catch (const json::exception& e) {
        throw ConfigError("cannot parse config " + path.string() + ": " + e.what());
    }
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    ConfigFile c;
    if (j.contains("parameters")) {
        c.parameters = j.at("parameters");
        if (j.contains("command")) c.command = j.at("command").get<std::string>();
        if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
    } else {
        c.parameters = j;
    }
    return c;
}

std::vector<std::filesystem::path> execute(const RunConfig& config) {
    const Command& cmd = find_command(config.command);
    if (config.threads > 0) set_thread_count(config.threads);
    const Outputs out = cmd.run(config);
    std::filesystem::create_directories(config.out_dir);
    std::vector<std::filesystem::path> written;
    json names = json::array();
    for (const auto& f : out.files) {
        const auto path = config.out_dir / f.name;
        write_file_atomic(path, f.contents);
        written.push_back(path);
        names.push_back(f.name);
    }
    const json manifest = {{"paper_anchor", cmd.anchor},
                           {"command", cmd.name},
                           {"parameters", config.parameters},
                           {"seed", config.seed},
                           {"grid", out.grid},
                           {"results_path", names}};
    const auto mpath = config.out_dir / "manifest.json";
    write_file_atomic(mpath, dump(manifest));
    written.push_back(mpath);
    return written;
}

int exit_code_for_current_exception() noexcept {
    try {
        throw;
    } catch (const ConfigError& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "invalid config: " << e.what() << '\n';
        return 2;
    } catch (const GuardViolation& e) {
        std::cerr << "guard violation: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    } catch (...) {
        std::cerr << "numerical failure\n";
        return 4;
    }
}

}  // namespace nlab::cli

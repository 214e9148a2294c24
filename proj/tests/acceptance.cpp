#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "commands.hpp"
#include "nlab/experiments.hpp"
#include "nlab/io.hpp"
#include "nlab/parallel.hpp"
#include "nlab/profiles.hpp"
#include "nlab/riesz.hpp"
#include "nlab/suite.hpp"

using namespace nlab;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int id, bool ok, const std::string& title, const std::string& detail) {
    std::printf("%s C%d %s: %s\n", ok ? "PASS" : "FAIL", id, title.c_str(), detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
}

template <class... A>
void info(const char* fmt, A... args) {
    std::printf("  info: ");
    std::printf(fmt, args...);
    std::printf("\n");
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double summary_number(const StudyReport& r, const char* key) { return number_from_json(r.summary.at(key)); }

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

std::string suite_line(const std::vector<SuiteCheck>& checks, bool& ok) {
    std::string s;
    ok = true;
    for (const auto& c : checks) {
        ok = ok && c.passed();
        char buf[200];
        std::snprintf(buf, sizeof buf, "%s%s %zu/%zu failed (worst %.3g, skipped %zu)", s.empty() ? "" : "; ",
                      c.name.c_str(), c.failures, c.cases, c.worst, c.skipped);
        s += buf;
    }
    return s;
}

const std::vector<double> kDeltas{1e-3, 2e-3, 5e-3, 1e-2};

void c1_counterexample() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = counterexample_scan(2.0, 1e-2, kDeltas, 8);
    const double elapsed = seconds_since(t0);
    const auto diff = r.column("oracle_diff"), gu = r.column("gap_u"), guh = r.column("gap_uh");
    bool ok = elapsed <= 120.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < diff.size(); ++i) {
        ok = ok && diff[i] > 0.0 && gu[i] <= 0.01 && guh[i] <= 0.01;
        worst = std::max({worst, gu[i], guh[i]});
        info("delta=%g oracle_diff=%.6e gap_u=%.4e gap_uh=%.4e defect=%.6e half_grid_diff=%.6e", kDeltas[i], diff[i],
             gu[i], guh[i], r.column("defect")[i], r.column("half_grid_diff")[i]);
    }
    verdict(1, ok, "counterexample reproduction",
            "all oracle differences positive=" + std::string(std::all_of(diff.begin(), diff.end(), [](double v) { return v > 0; }) ? "yes" : "no") +
                ", worst grid/oracle gap " + fmt("%.4f", 100 * worst) + "% (limit 1%), " + fmt("%.2f", elapsed) + " s");
}

void c2_scalings() {
    const auto r2 = counterexample_scan(2.0, 1e-2, kDeltas, 8, false, false);
    const auto r1 = counterexample_scan(1.0, 1e-2, kDeltas, 8, false, false);
    const double gain_slope = summary_number(r2, "gain_slope");
    const double far_slope = summary_number(r2, "far_loss_slope");
    const double ramp_spread = summary_number(r2, "ramp_over_eps_delta_spread");
    const double log_spread = summary_number(r1, "gain_over_delta_log_spread");
    const bool ok = std::fabs(gain_slope - 1.0) <= 0.2 && std::fabs(far_slope - 2.0) <= 0.3 && ramp_spread < 0.25 &&
                    log_spread < 0.25;
    info("p=1 far_loss slope %.4f, ramp spread %.4f", summary_number(r1, "far_loss_slope"),
         summary_number(r1, "ramp_over_eps_delta_spread"));
    verdict(2, ok, "asymptotic scalings",
            "gain slope " + fmt("%.4f", gain_slope) + ", far-loss slope " + fmt("%.4f", far_slope) +
                ", ramp/(eps delta) spread " + fmt("%.4f", ramp_spread) + ", p=1 gain/(delta|ln delta|) spread " +
                fmt("%.4f", log_spread));
}

void c3_ng() {
    const auto t0 = std::chrono::steady_clock::now();
    const std::vector<double> d{0.1, 0.05, 0.025};
    const auto r = ng_limit_study(gaussian(1, {0, 0}, 1.0), 6.0, 2.0, d, 8.0);
    const double elapsed = seconds_since(t0);
    const double x = summary_number(r, "extrapolated_ratio_exact");
    for (std::size_t i = 0; i < d.size(); ++i)
        info("delta=%g ratio_exact=%.6f ratio_discrete=%.6f", d[i], r.column("ratio_exact")[i],
             r.column("ratio_discrete")[i]);
    verdict(3, x >= 0.95 && x <= 1.05 && elapsed <= 300.0, "Ng limit",
            "extrapolated ratio " + fmt("%.6f", x) + ", " + fmt("%.2f", elapsed) + " s");
}

void c4_bbm() {
    const std::vector<double> s{0.9, 0.99, 0.999}, h{0.02, 0.01, 0.005};
    const auto r = bbm_study(gaussian(1, {0, 0}, 1.0), 6.0, 2.0, s, h);
    const double k = summary_number(r, "extrapolated_ratio_k");
    const double kp = summary_number(r, "extrapolated_ratio_k_over_p");
    for (std::size_t i = 0; i < s.size(); ++i)
        info("s=%g h=%g ratio_k=%.6f ratio_k_over_p=%.6f", s[i], h[i], r.column("ratio_k")[i],
             r.column("ratio_k_over_p")[i]);
    info("against (1/p) K_{1,2} int |u'|^2 the extrapolated ratio is %.6f", kp);
    verdict(4, std::fabs(k - 1.0) <= 0.05, "BBM limit",
            "extrapolated ratio to K_{1,2} int |u'|^2 " + fmt("%.6f", k) + " (target 1 within 5%)");
}

void c5_decomposition() {
    bool ok;
    const auto line = suite_line(decomposition_suite(100, 5, 11), ok);
    verdict(5, ok, "decomposition identities", line);
}

void c6_two_point() {
    auto checks = young_suite(200, 12);
    const auto g = gagliardo_suite(100, 13);
    checks.insert(checks.end(), g.begin(), g.end());
    bool ok;
    const auto line = suite_line(checks, ok);
    verdict(6, ok, "two-point inequalities", line);
}

void c7_structural() {
    bool ok;
    const auto line = suite_line(structural_suite(200, 14), ok);
    verdict(7, ok, "structural suite", line);
}

void c8_iterated() {
    const auto t0 = std::chrono::steady_clock::now();
    const GridSpec g(2, 3.0, 32);
    const auto u0 = sample(g, smooth_bump(2, {0.9, 0.6}, 1.0));
    const auto r = polarization_convergence_study(u0, HalfSpaceSchedule(g, 1), 200, 2.0);
    const double elapsed = seconds_since(t0);
    const bool mono = r.summary.at("non_increasing").get<bool>();
    const double ratio = summary_number(r, "final_over_initial");
    verdict(8, mono && ratio < 0.5 && elapsed <= 300.0, "iterated polarization",
            std::string("non-increasing=") + (mono ? "yes" : "no") + ", final/initial " + fmt("%.4f", ratio) + ", " +
                fmt("%.2f", elapsed) + " s");
}

void c9_decay() {
    bool ok;
    const auto line = suite_line(decay_bound_suite(50, 15), ok);
    verdict(9, ok, "decay suite", line);
}

GridFunction reflect(const GridFunction& u, const Reflection& r) {
    GridFunction v(u.spec());
    for (std::size_t i = 0; i < u.size(); ++i)
        if (auto j = r.image(i)) v[i] = u[*j];
    return v;
}

void c10_riesz() {
    const std::vector<double> sv{0.3, 0.5, 0.7};
    const auto oracle = riesz_oracle_study(gaussian(1, {0, 0}, 1.0), 8.0, 128, sv);
    const auto gaps = oracle.column("inner_l2_gap");
    const double worst_gap = *std::max_element(gaps.begin(), gaps.end());
    for (std::size_t i = 0; i < sv.size(); ++i) info("s=%g inner L2 gap %.4e", sv[i], gaps[i]);

    // J(u)(x^H) = J(v)(x) and the v, w identities on random data.
    std::mt19937_64 rng(16);
    std::uniform_real_distribution<double> c(-1.0, 1.0), rad(0.5, 1.2), coin(0.0, 1.0);
    std::uniform_int_distribution<int> level(0, 16);
    double refl_worst = 0.0;
    std::size_t refl_cases = 0, refl_skipped = 0, vw_failures = 0, vw_cells = 0;
    for (int t = 0; t < 100; ++t) {
        const int dim = t % 2 == 0 ? 1 : 2;
        const GridSpec g(dim, 4.0, dim == 1 ? 128 : 32);
        const int max_offset = g.cells_per_axis() / 8;
        GridAlignedHalfSpace h;
        h.axis = dim == 2 && coin(rng) < 0.5 ? 1 : 0;
        h.offset_cells = static_cast<int>(coin(rng) * (max_offset + 1)) % (max_offset + 1);
        h.side = h.offset_cells > 0 && coin(rng) < 0.5 ? Side::Upper : Side::Lower;
        const Reflection r(g, h);
        const auto u = sample(g, sum(smooth_bump(dim, {c(rng), c(rng)}, rad(rng)),
                                     smooth_bump(dim, {c(rng), c(rng)}, rad(rng), 0.6)));
        bool inside = true;
        for (std::size_t i = 0; i < u.size(); ++i) inside = inside && (u[i] == 0.0 || r.image(i).has_value());
        if (!inside) {
            ++refl_skipped;
        } else {
            ++refl_cases;
            const auto ju = j_functional(u, 0.5, 2.0), jv = j_functional(reflect(u, r), 0.5, 2.0);
            double scale = 0.0;
            for (std::size_t i = 0; i < u.size(); ++i) scale = std::max(scale, ju[i]);
            for (std::size_t i = 0; i < u.size(); ++i)
                if (auto j = r.image(i)) refl_worst = std::max(refl_worst, std::fabs(jv[i] - ju[*j]) / scale);
        }

        GridFunction q(g);
        for (std::size_t i = 0; i < q.size(); ++i)
            if (!r.in_h(i) || r.image(i)) q[i] = level(rng) / 8.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            if (r.in_h(i) && !r.fixed(i) && !r.image(i)) q[i] = 0.0;
        for (std::size_t i = 0; i < q.size(); ++i)
            if (!r.in_h(i) && !r.image(i)) q[i] = 0.0;
        const auto vw = vw_decomposition(q, h);
        const auto qh = polarize(q, h);
        for (std::size_t i = 0; i < q.size(); ++i) {
            if (!r.in_h(i)) continue;
            ++vw_cells;
            const double plus = std::max(q[i] - vw.v[i], 0.0);
            if (qh[i] != vw.v[i] + plus || vw.w[i] != q[i] - plus) ++vw_failures;
        }
    }
    info("reflection identity: %zu cases, %zu skipped (support not mirrored inside the grid), worst %.3e",
         refl_cases, refl_skipped, refl_worst);
    info("v/w identities: %zu cells, %zu failures", vw_cells, vw_failures);

    const auto k = keycond_study(100, 1, 128, 0.5, 2.0, 17);
    std::size_t flagged = 0;
    for (double v : k.column("violations")) flagged += v > 0.0;
    const double residual = summary_number(k, "max_global_identity_residual");
    info("keycond probe (open problem, report only): 100 trials, %zu trials with flagged cells, %zu flagged cells, "
         "global identity residual %.3e",
         flagged, k.summary.at("total_violations").get<std::size_t>(), residual);
    for (const auto& cand : k.summary.at("candidates"))
        info("keycond candidate trial %zu: %zu cells, max excess %s, refined grid %zu cells",
             cand.at("trial").get<std::size_t>(), cand.at("violations").get<std::size_t>(),
             cand.at("max_excess").dump().c_str(), cand.at("refined_violations").get<std::size_t>());

    const bool ok = worst_gap <= 0.01 && refl_cases > 0 && refl_worst <= 1e-10 && vw_failures == 0 && residual <= 1e-10;
    verdict(10, ok, "Riesz module",
            "worst spectral gap " + fmt("%.3e", worst_gap) + ", reflection identity worst " + fmt("%.2e", refl_worst) +
                ", v/w failures " + std::to_string(vw_failures) + ", keycond report emitted");
}

void c11_vanishing() {
    const std::vector<double> d{0.2, 0.02};
    const GridAlignedHalfSpace h{0, 0, Side::Lower};
    auto ratio_of = [&](const Profile& f, const char* label) {
        const auto r = vanishing_defect_study(f, 4.0, h, 2.0, d, 8.0);
        const auto a = r.column("abs_defect");
        info("%s: |defect| %.6e at delta=0.2, %.6e at delta=0.02", label, a[0], a[1]);
        return std::pair{a[0], a[1]};
    };
    const auto [s0, s1] = ratio_of(gaussian(1, {0.7, 0}, 0.5), "shifted gaussian");
    const auto [t0, t1] = ratio_of(sum(gaussian(1, {1.0, 0}, std::sqrt(0.125)), gaussian(1, {-1.0, 0}, std::sqrt(0.5), 0.7)),
                                   "two-gaussians companion");
    const bool ok = s1 <= 0.3 * s0 && t1 <= 0.3 * t0 && t0 > 0.0;
    verdict(11, ok, "vanishing defect",
            "shifted gaussian " + fmt("%.3e", s1) + " <= 0.3 x " + fmt("%.3e", s0) + "; companion ratio " +
                fmt("%.4f", t0 > 0 ? t1 / t0 : NAN));
}

bool same_tree(const fs::path& a, const fs::path& b, std::size_t& files) {
    bool same = true;
    for (const auto& e : fs::directory_iterator(a)) {
        const fs::path other = b / e.path().filename();
        ++files;
        same = same && fs::exists(other) && read_file(e.path()) == read_file(other);
    }
    for (const auto& e : fs::directory_iterator(b)) same = same && fs::exists(a / e.path().filename());
    return same;
}

void c12_determinism() {
    const fs::path root = fs::temp_directory_path() / "nlab_acceptance_determinism";
    fs::remove_all(root);
    std::size_t files = 0;
    bool ok = true;
    std::vector<std::string> differing;
    for (const auto& cmd : cli::commands()) {
        nlohmann::json overrides = nlohmann::json::object();
        if (cmd.name == "inequality-suite") overrides["trials"] = 20;
        if (cmd.name == "riesz") overrides["trials"] = 20;
        cli::RunConfig rc;
        rc.command = cmd.name;
        rc.parameters = cli::merge_parameters(cmd, nlohmann::json::object(), overrides);
        rc.seed = 42;
        for (int run = 0; run < 2; ++run) {
            rc.out_dir = root / cmd.name / std::to_string(run);
            rc.threads = run == 0 ? 1 : 0;
            cli::execute(rc);
        }
        if (!same_tree(root / cmd.name / "0", root / cmd.name / "1", files)) {
            ok = false;
            differing.push_back(cmd.name);
        }
    }
    set_thread_count(0);
    fs::remove_all(root);
    std::string detail = std::to_string(cli::commands().size()) + " commands, " + std::to_string(files) +
                         " files compared byte for byte (1 thread vs default)";
    for (const auto& n : differing) detail += ", differs: " + n;
    verdict(12, ok, "determinism", detail);
}

}  // namespace

int main() {
    const std::vector<std::function<void()>> criteria{c1_counterexample, c2_scalings, c3_ng,       c4_bbm,
                                                      c5_decomposition,  c6_two_point, c7_structural, c8_iterated,
                                                      c9_decay,          c10_riesz,    c11_vanishing, c12_determinism};
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i]();
        } catch (const std::exception& e) {
            verdict(static_cast<int>(i + 1), false, "criterion", std::string("threw: ") + e.what());
        }
    }
    std::printf("%d of %zu criteria failed\n", failures, criteria.size());
    return failures == 0 ? 0 : 1;
}

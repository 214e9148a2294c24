#include "nlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "nlab/errors.hpp"
#include "nlab/riesz.hpp"

namespace nlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

int checked_count(double x, const char* what) {
    const double r = std::round(x);
    if (r < 1 || std::fabs(x - r) > 1e-9 * r) throw GuardViolation(std::string("grid does not resolve ") + what);
    return static_cast<int>(r);
}

// Cells per unit length and origin index along axis 0.
struct Layout {
    int n1;
    int origin;
    int ramp;
};

Layout layout(const CounterexampleSpec& s) {
    const GridSpec g = s.grid();
    return {checked_count(1.0 / s.h(), "the unit breakpoints"), g.cells_per_axis() / 2, s.refinement};
}

double mm1_value(const CounterexampleSpec& s, const Layout& l, int j) {
    const double d = s.delta, e = s.eps_delta();
    double v = 0.0;
    if (j >= -2 * l.n1 && j < -l.n1)
        v = d;
    else if (j >= -l.n1 && j < -l.n1 + l.ramp)
        v = d - (d + 2.0 * e) * ((j + l.n1) + 0.5) / l.ramp;
    else if (j >= -l.n1 + l.ramp && j < 0)
        v = -2.0 * e;
    else if (j >= 0 && j < l.n1)
        v = -e;
    else if (j >= l.n1 && j < 2 * l.n1)
        v = d - e;
    if (s.shifted && j >= -3 * l.n1 && j < 3 * l.n1) v += 2.0 * e;
    return v;
}

void require_exact(bool ok, const char* what) {
    if (!ok) throw NumericalFailure(std::string("jump is not exact in floating point: ") + what);
}

double safe_ratio(double a, double b) { return b == 0.0 ? (a == 0.0 ? 0.0 : kNaN) : a / b; }

std::vector<double> sorted_values(const GridFunction& u) {
    std::vector<double> v(u.values().begin(), u.values().end());
    std::sort(v.begin(), v.end());
    return v;
}

nlohmann::json grid_json(const GridSpec& g) {
    return {{"dim", g.dim()}, {"half_width", g.half_width()}, {"cells_per_axis", g.cells_per_axis()}, {"h", g.h()}};
}

nlohmann::json half_space_json(const GridAlignedHalfSpace& h) {
    return {{"axis", h.axis}, {"offset_cells", h.offset_cells}, {"side", h.side == Side::Lower ? "lower" : "upper"}};
}

}  // namespace

void CounterexampleSpec::validate() const {
    if (!(delta > 0.0 && delta < 0.5)) throw GuardViolation("delta must lie in (0, 1/2)");
    if (!(epsilon > 0.0 && epsilon < 0.125)) throw GuardViolation("epsilon must lie in (0, 1/8)");
    if (!(p >= 1.0)) throw GuardViolation("p must be at least 1");
    if (dim != 1 && dim != 2) throw GuardViolation("dim must be 1 or 2");
    if (refinement < 1) throw GuardViolation("refinement must be positive");
    if (!(half_width >= 3.0)) throw GuardViolation("half width must be at least 3");
    checked_count(1.0 / h(), "the unit breakpoints");
    checked_count(half_width / h(), "the domain");
}

double CounterexampleSpec::eps_delta() const {
    const double quantum = 4.0 * (std::nextafter(delta, 1.0) - delta);
    const double e = std::round(epsilon * delta / quantum) * quantum;
    if (!(e > 0.0)) throw GuardViolation("epsilon * delta underflows the jump quantum");
    return e;
}

GridSpec CounterexampleSpec::grid() const {
    validate();
    const int m = 2 * checked_count(half_width / h(), "the domain");
    return GridSpec(dim, half_width, m);
}

GridAlignedHalfSpace counterexample_half_space() { return {0, 0, Side::Upper}; }

GridFunction build_mm1(const CounterexampleSpec& s) {
    if (s.dim != 1) throw GuardViolation("build_mm1 is one-dimensional");
    const GridSpec g = s.grid();
    const Layout l = layout(s);
    const double d = s.delta, e = s.eps_delta();
    require_exact((d - e) - (-e) == d, "delta - eps delta against -eps delta");
    if (s.shifted) {
        require_exact((d + 2.0 * e) - 2.0 * e == d, "shifted plateau at -2");
        require_exact((d - e + 2.0 * e) - (-e + 2.0 * e) == d, "shifted plateau at 1");
    }
    GridFunction u(g);
    for (int k = 0; k < g.cells_per_axis(); ++k) u[static_cast<std::size_t>(k)] = mm1_value(s, l, k - l.origin);
    return u;
}

PartialGridFunction build_mm2_reference(const CounterexampleSpec& s) {
    if (s.dim != 1) throw GuardViolation("build_mm2_reference is one-dimensional");
    const GridSpec g = s.grid();
    const Layout l = layout(s);
    const double d = s.delta, e = s.eps_delta();
    PartialGridFunction r{GridFunction(g), std::vector<char>(g.size(), 0)};
    for (int k = 0; k < g.cells_per_axis(); ++k) {
        const int j = k - l.origin;
        double v = 0.0;
        bool def = true;
        if (j < -2 * l.n1 || j >= 2 * l.n1)
            v = 0.0;
        else if (j < -l.n1)
            v = d - e;
        else if (j >= -l.n1 + l.ramp && j < 0)
            v = -2.0 * e;
        else if (j >= 0 && j < l.n1 - l.ramp)
            v = -e;
        else if (j >= l.n1)
            v = d;
        else
            def = false;
        if (def && s.shifted && j >= -3 * l.n1 && j < 3 * l.n1) v += 2.0 * e;
        r.values[static_cast<std::size_t>(k)] = def ? v : 0.0;
        r.defined[static_cast<std::size_t>(k)] = def;
    }
    return r;
}

GridFunction build_nd_counterexample(const CounterexampleSpec& s) {
    if (s.dim != 2) throw GuardViolation("the product construction needs dim = 2");
    const GridSpec g = s.grid();
    const Layout l = layout(s);
    const double d = s.delta, e = s.eps_delta();
    require_exact(((d - e) - d / 2.0) - (-e - d / 2.0) == d, "shifted plateaus at x1 = 1");
    GridFunction u(g);
    const int m = g.cells_per_axis();
    for (int k0 = 0; k0 < m; ++k0) {
        const int j0 = k0 - l.origin;
        if (j0 < -2 * l.n1 || j0 >= 2 * l.n1) continue;
        const double v = mm1_value(s, l, j0) - d / 2.0;
        for (int k1 = 0; k1 < m; ++k1) {
            const int j1 = k1 - l.origin;
            if (j1 < -2 * l.n1 || j1 >= 2 * l.n1) continue;
            u[g.flat({k0, k1})] = v;
        }
    }
    return u;
}

PiecewiseLinear mm1_pieces(const CounterexampleSpec& s) {
    s.validate();
    using R = long double;
    const double d = s.delta, e = s.eps_delta();
    const double lift = s.shifted ? 2.0 * e : 0.0;
    auto up = [&](double v) -> R { return s.shifted ? static_cast<R>(v + lift) : static_cast<R>(v); };
    const R rd = d;
    std::vector<LinearPiece> pieces{
        {-2, -1, up(d), up(d)},
        {-1, -1 + rd, up(d), up(-2.0 * e)},
        {-1 + rd, 0, up(-2.0 * e), up(-2.0 * e)},
        {0, 1, up(-e), up(-e)},
        {1, 2, up(d - e), up(d - e)},
    };
    if (s.shifted) {
        pieces.push_back({-3, -2, up(0.0), up(0.0)});
        pieces.push_back({2, 3, up(0.0), up(0.0)});
    }
    return PiecewiseLinear(std::move(pieces));
}

double analytic_oracle_i_delta_mm(const CounterexampleSpec& s, Which which) {
    const auto u = mm1_pieces(s);
    const auto f = which == Which::U ? u : u.polarized(0, Side::Upper);
    return oracle_i_delta(f, s.delta, s.p).value_or_inf();
}

AsymptoticTerms asymptotic_terms(const CounterexampleSpec& s) {
    const long double d = s.delta;
    const long double dp = std::pow(d, static_cast<long double>(s.p));
    AsymptoticTerms t{};
    t.gain = static_cast<double>(dp * rectangle_kernel_integral(0, 1 - d, 1, 2, s.p));
    t.far_loss = static_cast<double>(dp * rectangle_kernel_integral(-1, 0, 1, 2, s.p));
    CounterexampleSpec raw = s;
    raw.shifted = false;
    t.ramp_loss = oracle_i_delta_restricted(mm1_pieces(raw), -1, -1 + d, -2, 0, s.delta, s.p).value_or_inf();
    return t;
}

StudyReport counterexample_scan(double p, double epsilon, std::span<const double> deltas, int refinement,
                                bool shifted, bool with_grid) {
    StudyReport r;
    r.name = "counterexample";
    r.anchor = "one-dimensional counterexample: I_delta(u^H) > I_delta(u) for H = [0, inf)";
    r.parameters = {{"p", p},
                    {"epsilon", epsilon},
                    {"deltas", std::vector<double>(deltas.begin(), deltas.end())},
                    {"refinement", refinement},
                    {"shifted", shifted},
                    {"with_grid", with_grid},
                    {"half_space", half_space_json(counterexample_half_space())}};
    r.grid = {{"h", "delta / refinement"}, {"half_width", 3.0}, {"dim", 1}};
    r.columns = {"delta",  "epsilon",  "eps_delta", "p",        "h",         "cells",      "oracle_u",
                 "oracle_uh", "oracle_diff", "grid_u", "grid_uh", "grid_diff", "gap_u",      "gap_uh",
                 "defect", "half_grid_diff", "gain", "ramp_loss", "far_loss", "lower_bound", "gain_over_delta",
                 "gain_over_delta_log", "ramp_over_eps_delta", "far_over_delta_p"};
    const auto h = counterexample_half_space();
    for (double d : deltas) {
        CounterexampleSpec s{d, epsilon, p, 1, refinement, 3.0, shifted};
        const GridSpec g = s.grid();
        const double ou = analytic_oracle_i_delta_mm(s, Which::U);
        const double ouh = analytic_oracle_i_delta_mm(s, Which::UH);
        double gu = kNaN, guh = kNaN, def = kNaN;
        if (with_grid) {
            const auto u = build_mm1(s);
            const auto uh = polarize(u, h);
            gu = i_delta(u, s.kernel()).value_or_inf();
            guh = i_delta(uh, s.kernel()).value_or_inf();
            def = defect(u, h, s.kernel()).value_or_inf();
        }
        const auto t = asymptotic_terms(s);
        const double e = s.eps_delta();
        r.add_row({d,
                   epsilon,
                   e,
                   p,
                   g.h(),
                   static_cast<double>(g.size()),
                   ou,
                   ouh,
                   ouh - ou,
                   gu,
                   guh,
                   guh - gu,
                   std::fabs(gu - ou) / ou,
                   std::fabs(guh - ouh) / ouh,
                   def,
                   0.5 * (guh - gu),
                   t.gain,
                   t.ramp_loss,
                   t.far_loss,
                   t.gain - 2.0 * t.ramp_loss - 2.0 * t.far_loss,
                   t.gain / d,
                   t.gain / (d * std::fabs(std::log(d))),
                   t.ramp_loss / e,
                   t.far_loss / std::pow(d, p)});
    }
    if (deltas.size() >= 2) {
        r.summary["gain_slope"] = number_to_json(loglog_slope(r.column("delta"), r.column("gain")));
        r.summary["far_loss_slope"] = number_to_json(loglog_slope(r.column("delta"), r.column("far_loss")));
        r.summary["ramp_loss_slope"] = number_to_json(loglog_slope(r.column("delta"), r.column("ramp_loss")));
        r.summary["ramp_over_eps_delta_spread"] = number_to_json(relative_spread(r.column("ramp_over_eps_delta")));
        r.summary["gain_over_delta_log_spread"] = number_to_json(relative_spread(r.column("gain_over_delta_log")));
    }
    const auto diffs = r.column("oracle_diff");
    r.summary["all_differences_positive"] =
        std::all_of(diffs.begin(), diffs.end(), [](double v) { return v > 0.0; });
    return r;
}

StudyReport positivity_region_scan(double p, std::span<const double> deltas, std::span<const double> epsilons,
                                   bool epsilon_equals_delta) {
    StudyReport r;
    r.name = "positivity-region";
    r.anchor = "existence of delta_0: sign of I_delta(u^H) - I_delta(u) over a (delta, epsilon) grid";
    r.parameters = {{"p", p},
                    {"deltas", std::vector<double>(deltas.begin(), deltas.end())},
                    {"epsilons", std::vector<double>(epsilons.begin(), epsilons.end())},
                    {"epsilon_equals_delta", epsilon_equals_delta}};
    r.grid = {{"kind", "analytic"}};
    r.columns = {"delta", "epsilon", "oracle_diff", "positive"};
    auto row = [&](double d, double e) {
        CounterexampleSpec s{d, e, p, 1, 8, 3.0, false};
        const double diff = analytic_oracle_i_delta_mm(s, Which::UH) - analytic_oracle_i_delta_mm(s, Which::U);
        r.add_row({d, e, diff, diff > 0.0 ? 1.0 : 0.0});
    };
    for (double d : deltas) {
        if (epsilon_equals_delta && std::find(epsilons.begin(), epsilons.end(), d) == epsilons.end()) row(d, d);
        for (double e : epsilons) row(d, e);
    }
    return r;
}

StudyReport vanishing_defect_study(const Profile& f, double half_width, const GridAlignedHalfSpace& h, double p,
                                   std::span<const double> deltas, double refinement) {
    if (f.dim != 1) throw GuardViolation("the vanishing-defect study is one-dimensional");
    StudyReport r;
    r.name = "vanishing-defect";
    r.anchor = "defect of I_delta under polarization tends to 0 as delta decreases";
    r.parameters = {{"profile", f.name},
                    {"p", p},
                    {"deltas", std::vector<double>(deltas.begin(), deltas.end())},
                    {"refinement", refinement},
                    {"half_space", half_space_json(h)}};
    r.grid = {{"h", "delta / refinement"}, {"half_width", half_width}, {"dim", 1}};
    r.columns = {"delta", "h", "defect", "half_difference", "identity_residual", "abs_defect"};
    for (double d : deltas) {
        const GridSpec g = GridSpec::with_cell_width(1, half_width, d / refinement);
        const auto u = sample(g, f);
        const auto uh = polarize(u, h);
        const KernelParams k{p, d, 0.5};
        const double iu = i_delta(u, k).value_or_inf(), iuh = i_delta(uh, k).value_or_inf();
        const double def = defect(u, h, k).value_or_inf();
        const double half = 0.5 * (iuh - iu);
        const double scale = std::max({std::fabs(half), std::fabs(def), 1e-300});
        r.add_row({d, g.h(), def, half, std::fabs(def - half) / scale, std::fabs(def)});
    }
    const auto abs_def = r.column("abs_defect");
    const bool nonzero = std::all_of(abs_def.begin(), abs_def.end(), [](double v) { return v > 0.0; });
    r.summary["rate"] = nonzero && deltas.size() >= 2 ? number_to_json(loglog_slope(r.column("delta"), abs_def))
                                                      : number_to_json(kNaN);
    r.summary["identically_zero"] = std::all_of(abs_def.begin(), abs_def.end(), [](double v) { return v == 0.0; });
    return r;
}

StudyReport ng_limit_study(const Profile& f, double half_width, double p, std::span<const double> deltas,
                           double refinement) {
    StudyReport r;
    r.name = "ng-limit";
    r.anchor = "pointwise limit of I_delta: (1/p) K_{N,p} int |grad u|^p";
    r.parameters = {{"profile", f.name},
                    {"p", p},
                    {"deltas", std::vector<double>(deltas.begin(), deltas.end())},
                    {"refinement", refinement}};
    r.grid = {{"h", "delta / refinement"}, {"half_width", half_width}, {"dim", f.dim}};
    r.columns = {"delta", "h", "value", "target_discrete", "ratio_discrete", "target_exact", "ratio_exact"};
    const double exact =
        f.gradient_energy ? knp_constant(f.dim, p) / p * f.gradient_energy(p) : kNaN;
    for (const auto& row : ng_limit_estimate(f, half_width, p, deltas, refinement))
        r.add_row({row.param, row.h, row.value, row.target, row.ratio, exact, safe_ratio(row.value, exact)});
    if (deltas.size() >= 2) {
        r.summary["extrapolated_ratio_exact"] =
            number_to_json(extrapolate_to_zero(r.column("delta"), r.column("ratio_exact")));
        r.summary["extrapolated_ratio_discrete"] =
            number_to_json(extrapolate_to_zero(r.column("delta"), r.column("ratio_discrete")));
    }
    return r;
}

StudyReport bbm_study(const Profile& f, double half_width, double p, std::span<const double> s_values,
                      std::span<const double> cell_widths) {
    if (s_values.size() != cell_widths.size()) throw ConfigError("s values and cell widths must pair up");
    StudyReport r;
    r.name = "bbm-limit";
    r.anchor = "(1 - s) times the Gagliardo seminorm as s tends to 1";
    r.parameters = {{"profile", f.name},
                    {"p", p},
                    {"s_values", std::vector<double>(s_values.begin(), s_values.end())},
                    {"cell_widths", std::vector<double>(cell_widths.begin(), cell_widths.end())}};
    r.grid = {{"half_width", half_width}, {"dim", f.dim}};
    r.columns = {"s", "h", "value", "target_k", "ratio_k", "target_k_over_p", "ratio_k_over_p", "ratio_discrete"};
    const double energy = f.gradient_energy ? f.gradient_energy(p) : kNaN;
    const double kk = knp_constant(f.dim, p) * energy;
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const GridSpec g = GridSpec::with_cell_width(f.dim, half_width, cell_widths[i]);
        auto u = sample(g, f);
        // Outermost cells vanish so the zero exterior joins the linear reconstruction.
        if (g.dim() == 1) u[0] = u[u.size() - 1] = 0.0;
        const double sv[] = {s_values[i]};
        const auto row = bbm_approximant(u, p, sv).front();
        r.add_row({row.param, g.h(), row.value, kk, safe_ratio(row.value, kk), kk / p, safe_ratio(row.value, kk / p),
                   row.ratio});
    }
    std::vector<double> one_minus_s;
    for (double s : s_values) one_minus_s.push_back(1.0 - s);
    if (s_values.size() >= 2) {
        r.summary["extrapolated_ratio_k"] = number_to_json(extrapolate_to_zero(one_minus_s, r.column("ratio_k")));
        r.summary["extrapolated_ratio_k_over_p"] =
            number_to_json(extrapolate_to_zero(one_minus_s, r.column("ratio_k_over_p")));
    }
    return r;
}

StudyReport decay_study(const GridFunction& u, const DecayParams& prm) {
    const int n = u.spec().dim();
    if (n != 2) throw GuardViolation("the decay study needs dim = 2");
    if (!(prm.p > 1.0 && prm.p < 2.0)) throw GuardViolation("the decay study needs 1 < p < 2");
    if (u.min() < 0.0) throw GuardViolation("the decay study needs u >= 0");
    if (!(prm.lambda > 0.0)) throw GuardViolation("lambda must be positive");
    const double pstar = n * prm.p / (n - prm.p);
    const double power = n / (n - prm.p);
    const auto ustar = schwarz_rearrange(u);
    const auto mu = distribution_function(u);

    StudyReport r;
    r.name = "decay";
    r.anchor = "measure of superlevel sets against I_delta(u*) and Lorentz pointwise decay of u*";
    r.parameters = {{"p", prm.p}, {"lambda", prm.lambda}, {"theta", number_to_json(prm.theta)}, {"deltas", prm.deltas}};
    r.grid = grid_json(u.spec());
    r.columns = {"delta", "mu", "i_u", "i_ustar", "ratio_u", "ratio_ustar"};
    std::vector<double> ds(prm.deltas);
    std::sort(ds.begin(), ds.end());
    for (double d : ds) {
        const KernelParams k{prm.p, d, 0.5};
        const double m = mu(prm.lambda * d);
        const double iu = i_delta(u, k).value_or_inf(), is = i_delta(ustar, k).value_or_inf();
        const double num = m * std::pow(d, pstar);
        r.add_row({d, m, iu, is, safe_ratio(num, std::pow(iu, power)), safe_ratio(num, std::pow(is, power))});
    }
    // int I_delta^{theta/p} d delta / delta over the sampled range, trapezoid in log delta.
    const double theta_cond = std::isinf(prm.theta) ? prm.p : prm.theta;
    auto cond_with = [&](const std::vector<double>& iv) {
        double acc = 0.0;
        for (std::size_t i = 0; i + 1 < ds.size(); ++i) {
            const double a = std::pow(iv[i], theta_cond / prm.p), b = std::pow(iv[i + 1], theta_cond / prm.p);
            acc += 0.5 * (a + b) * std::log(ds[i + 1] / ds[i]);
        }
        return acc;
    };
    r.summary["cond_integral_u"] = number_to_json(cond_with(r.column("i_u")));
    r.summary["cond_integral_ustar"] = number_to_json(cond_with(r.column("i_ustar")));
    const double kcoef = pointwise_decay_bound(ustar, pstar, prm.theta);
    std::size_t violations = 0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ustar.size(); ++i) {
        const auto c = ustar.spec().center(i);
        const double rr = std::hypot(c[0], c[1]);
        const double bound = kcoef * std::pow(rr, -n / pstar);
        if (ustar[i] > bound) ++violations;
        if (bound > 0.0) worst = std::max(worst, ustar[i] / bound);
    }
    r.summary["lorentz_coefficient"] = number_to_json(kcoef);
    r.summary["pointwise_violations"] = violations;
    r.summary["max_pointwise_ratio"] = number_to_json(worst);
    return r;
}

StudyReport polarization_convergence_study(const GridFunction& u0, const HalfSpaceSchedule& schedule,
                                           std::size_t steps, double p) {
    if (u0.min() < 0.0) throw GuardViolation("iterated polarization needs u0 >= 0");
    const auto traj = iterate_polarization(u0, schedule, steps, p);
    const auto base = sorted_values(u0);
    StudyReport r;
    r.name = "polarization-convergence";
    r.anchor = "iterated polarization u_{n+1} = u_n^{H_1 ... H_{n+1}} converges to u* in L^p";
    r.parameters = {{"steps", steps}, {"p", p}, {"schedule_period", schedule.period()}};
    r.grid = grid_json(u0.spec());
    r.columns = {"step", "error", "multiset_preserved", "non_increasing"};
    bool all_mono = true, all_multi = true;
    for (std::size_t k = 0; k < traj.errors.size(); ++k) {
        const bool multi = sorted_values(traj.iterates[k]) == base;
        const bool mono = k == 0 || traj.errors[k] <= traj.errors[k - 1];
        all_mono = all_mono && mono;
        all_multi = all_multi && multi;
        r.add_row({static_cast<double>(k), traj.errors[k], multi ? 1.0 : 0.0, mono ? 1.0 : 0.0});
    }
    r.summary["initial_error"] = number_to_json(traj.errors.front());
    r.summary["final_error"] = number_to_json(traj.errors.back());
    r.summary["final_over_initial"] = number_to_json(safe_ratio(traj.errors.back(), traj.errors.front()));
    r.summary["non_increasing"] = all_mono;
    r.summary["multiset_preserved"] = all_multi;
    return r;
}

StudyReport sobolev_study(std::size_t bumps, double p, double delta, double lambda, int cells_per_axis,
                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> centre(-1.0, 1.0), radius(1.0, 2.0), height(0.5, 1.0);
    const double half_width = 3.0;
    const GridSpec g1(2, half_width, cells_per_axis), g2(2, half_width, 2 * cells_per_axis);
    StudyReport r;
    r.name = "sobolev";
    r.anchor = "Sobolev-type inequality for I_delta: empirical constant over a bump family";
    r.parameters = {{"bumps", bumps}, {"p", p}, {"delta", delta}, {"lambda", lambda}, {"seed", seed}};
    r.grid = {{"coarse", grid_json(g1)}, {"fine", grid_json(g2)}};
    r.columns = {"bump", "cx", "cy", "radius", "height", "ratio_h", "ratio_h2"};
    const KernelParams k{p, delta, 0.5};
    double max1 = 0.0, max2 = 0.0;
    for (std::size_t b = 0; b < bumps; ++b) {
        const double cx = centre(rng), cy = centre(rng), rad = radius(rng), ht = height(rng);
        const auto f = smooth_bump(2, {cx, cy}, rad, ht);
        const double r1 = sobolev_ratio(sample(g1, f), k, lambda).ratio;
        const double r2 = sobolev_ratio(sample(g2, f), k, lambda).ratio;
        max1 = std::max(max1, r1);
        max2 = std::max(max2, r2);
        r.add_row({static_cast<double>(b), cx, cy, rad, ht, r1, r2});
    }
    r.summary["max_ratio_h"] = number_to_json(max1);
    r.summary["max_ratio_h2"] = number_to_json(max2);
    r.summary["drift"] = number_to_json(max1 > 0.0 ? std::fabs(max2 / max1 - 1.0) : kNaN);
    return r;
}

StudyReport keycond_study(std::size_t trials, int dim, int cells_per_axis, double s, double p, std::uint64_t seed,
                          double rel_tolerance) {
    std::mt19937_64 rng(seed);
    const double half_width = 4.0;
    std::uniform_real_distribution<double> centre(-1.0, 1.0), radius(0.4, 1.0), height(0.2, 1.0), coin(0.0, 1.0);
    const GridSpec g(dim, half_width, cells_per_axis);
    const int max_offset = cells_per_axis / 8;
    StudyReport r;
    r.name = "keycond";
    r.anchor = "pointwise two-point inequality for the Riesz functional J under polarization";
    r.parameters = {{"trials", trials}, {"dim", dim}, {"s", s}, {"p", p}, {"seed", seed}, {"rel_tolerance", rel_tolerance}};
    r.grid = grid_json(g);
    r.columns = {"trial", "axis", "offset_cells", "upper", "violations", "max_excess", "global_residual",
                 "refined_violations"};
    nlohmann::json candidates = nlohmann::json::array();
    std::size_t total = 0;
    double worst_residual = 0.0;
    for (std::size_t t = 0; t < trials; ++t) {
        Profile f = smooth_bump(dim, {centre(rng), dim == 2 ? centre(rng) : 0.0}, radius(rng), height(rng));
        f = sum(f, smooth_bump(dim, {centre(rng), dim == 2 ? centre(rng) : 0.0}, radius(rng), height(rng)));
        GridAlignedHalfSpace h;
        h.axis = dim == 2 && coin(rng) < 0.5 ? 1 : 0;
        h.offset_cells = coin(rng) < 0.5 ? 0 : static_cast<int>(std::floor(coin(rng) * (max_offset + 1)));
        h.offset_cells = std::min(h.offset_cells, max_offset);
        h.side = h.offset_cells > 0 && coin(rng) < 0.5 ? Side::Upper : Side::Lower;
        const auto rep = keycond_probe(sample(g, f), h, s, p, rel_tolerance);
        double refined = kNaN;
        if (rep.violations > 0) {
            const GridSpec g2(dim, half_width, 2 * cells_per_axis);
            GridAlignedHalfSpace h2 = h;
            h2.offset_cells *= 2;
            const auto rep2 = keycond_probe(sample(g2, f), h2, s, p, rel_tolerance);
            refined = static_cast<double>(rep2.violations);
            nlohmann::json cells = nlohmann::json::array();
            for (const auto& c : rep.cells)
                if (c.violated) cells.push_back({{"cell", c.cell}, {"lhs", c.lhs}, {"rhs", c.rhs}});
            candidates.push_back({{"trial", t},
                                  {"half_space", half_space_json(h)},
                                  {"violations", rep.violations},
                                  {"max_excess", number_to_json(rep.max_excess)},
                                  {"tolerance", rep.tolerance},
                                  {"refined_violations", rep2.violations},
                                  {"refined_max_excess", number_to_json(rep2.max_excess)},
                                  {"cells", cells}});
        }
        total += rep.violations;
        if (rep.global_identity_applicable) worst_residual = std::max(worst_residual, rep.global_identity_residual);
        r.add_row({static_cast<double>(t), static_cast<double>(h.axis), static_cast<double>(h.offset_cells),
                   h.side == Side::Upper ? 1.0 : 0.0, static_cast<double>(rep.violations), rep.max_excess,
                   rep.global_identity_applicable ? rep.global_identity_residual : kNaN, refined});
    }
    r.summary["total_violations"] = total;
    r.summary["max_global_identity_residual"] = number_to_json(worst_residual);
    r.summary["candidates"] = candidates;
    return r;
}

double riesz_inner_gap(const GridFunction& u, double s, int padding) {
    if (u.spec().dim() != 1) throw GuardViolation("the spectral comparison is one-dimensional");
    const auto direct = fractional_gradient(u, s);
    const auto spectral = spectral_oracle_1d(u, s, padding);
    const double inner = u.spec().half_width() / 2.0;
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (std::fabs(u.spec().center(i)[0]) > inner) continue;
        const double d = direct.vectors[i] - spectral.vectors[i];
        num += d * d;
        den += spectral.vectors[i] * spectral.vectors[i];
    }
    return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

StudyReport riesz_oracle_study(const Profile& f, double half_width, int cells_per_axis,
                               std::span<const double> s_values) {
    const GridSpec g(1, half_width, cells_per_axis);
    const auto u = sample(g, f);
    StudyReport r;
    r.name = "riesz-oracle";
    r.anchor = "fractional gradient D^s u: direct quadrature against the Fourier-multiplier oracle";
    r.parameters = {{"profile", f.name}, {"s_values", std::vector<double>(s_values.begin(), s_values.end())}};
    r.grid = grid_json(g);
    r.columns = {"s", "convention_constant", "inner_l2_gap"};
    for (double s : s_values) r.add_row({s, riesz_constant(1, s), riesz_inner_gap(u, s)});
    return r;
}

}  // namespace nlab

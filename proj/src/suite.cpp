#include "nlab/suite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <array>
#include <random>

#include "nlab/grid.hpp"
#include "nlab/nonlocal.hpp"
#include "nlab/profiles.hpp"
#include "nlab/symm.hpp"

namespace nlab {
namespace {

constexpr double kQuantum = 0.125;

struct Draw {
    std::mt19937_64 rng;
    explicit Draw(std::uint64_t seed) : rng(seed) {}
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(rng); }
    bool coin() { return integer(0, 1) == 1; }
};

// Sum of signed smooth bumps near the origin, rounded to multiples of 1/8 so
// that differences are exact.
GridFunction random_function(Draw& d, const GridSpec& spec, bool nonnegative, double centre, double radius_lo,
                             double radius_hi, double height) {
    const int dim = spec.dim();
    const int bumps = d.integer(2, 3);
    Profile f;
    for (int k = 0; k < bumps; ++k) {
        const Point c{d.uniform(-centre, centre), dim == 2 ? d.uniform(-centre, centre) : 0.0};
        double ht = d.uniform(0.3, 1.0) * height;
        if (!nonnegative && d.coin()) ht = -ht;
        Profile b = smooth_bump(dim, c, d.uniform(radius_lo, radius_hi), ht);
        f = k == 0 ? b : sum(f, b);
    }
    GridFunction u = sample(spec, f);
    for (double& v : u.mutable_values()) v = std::round(v / kQuantum) * kQuantum;
    return u;
}

GridSpec grid_for(int dim) { return dim == 1 ? GridSpec(1, 4.0, 40) : GridSpec(2, 3.0, 12); }

GridFunction random_for(Draw& d, int dim, bool nonnegative) {
    return dim == 1 ? random_function(d, grid_for(1), nonnegative, 1.0, 0.8, 1.6, 2.0)
                    : random_function(d, grid_for(2), nonnegative, 0.5, 0.8, 1.5, 1.0);
}

GridAlignedHalfSpace random_half_space(Draw& d, int dim) {
    GridAlignedHalfSpace h;
    h.axis = dim == 2 ? d.integer(0, 1) : 0;
    h.offset_cells = d.integer(0, dim == 1 ? 3 : 1);
    h.side = h.offset_cells > 0 && d.coin() ? Side::Upper : Side::Lower;
    return h;
}

double rel(double a, double b) {
    const double scale = std::max(std::fabs(a), std::fabs(b));
    return scale == 0.0 ? 0.0 : std::fabs(a - b) / scale;
}

void record(SuiteCheck& c, double violation, double tolerance) {
    ++c.cases;
    c.worst = std::max(c.worst, violation);
    if (!(violation <= tolerance)) ++c.failures;
}

std::vector<double> sorted_values(const GridFunction& u) {
    std::vector<double> v(u.values().begin(), u.values().end());
    std::sort(v.begin(), v.end());
    return v;
}

}  // namespace

std::vector<SuiteCheck> decomposition_suite(std::size_t functions, std::size_t half_spaces, std::uint64_t seed) {
    Draw d(seed);
    SuiteCheck blocks{"block_sum"}, inv1{"o1_invariance"}, inv2{"o2_invariance"}, ident{"defect_identity"};
    const KernelParams prm{2.0, 1.0, 0.5};
    constexpr double tol = 1e-10;
    for (std::size_t n = 0; n < functions; ++n) {
        const int dim = n % 2 == 0 ? 1 : 2;
        const GridFunction u = random_for(d, dim, false);
        const EnergyValue iu = i_delta(u, prm);
        for (std::size_t k = 0; k < half_spaces; ++k) {
            const GridAlignedHalfSpace h = random_half_space(d, dim);
            const GridFunction uh = polarize(u, h);
            const EnergyValue iuh = i_delta(uh, prm);
            if (iu.is_divergent() || iuh.is_divergent()) {
                for (SuiteCheck* c : {&blocks, &inv1, &inv2, &ident}) ++c->skipped;
                continue;
            }
            const Partition part = partition_abcd(u, h);
            const Region o1 = part.o1(u.spec()), o2 = part.o2(u.spec());
            const double b11 = i_delta_restricted(u, o1, o1, prm).value();
            const double b22 = i_delta_restricted(u, o2, o2, prm).value();
            const double b12 = i_delta_restricted(u, o1, o2, prm).value();
            const double b21 = i_delta_restricted(u, o2, o1, prm).value();
            record(blocks, rel(b11 + b22 + b12 + b21, iu.value()), tol);
            record(inv1, rel(i_delta_restricted(uh, o1, o1, prm).value(), b11), tol);
            record(inv2, rel(i_delta_restricted(uh, o2, o2, prm).value(), b22), tol);
            const double half_gap = 0.5 * (iuh.value() - iu.value());
            const double dv = defect(u, h, prm).value();
            const double scale = std::max(iu.value(), iuh.value());
            record(ident, scale == 0.0 ? 0.0 : std::fabs(dv - half_gap) / scale, tol);
        }
    }
    return {blocks, inv1, inv2, ident};
}

std::vector<SuiteCheck> young_suite(std::size_t trials, std::uint64_t seed) {
    Draw d(seed);
    const std::vector<YoungFunction> menu{YoungFunction::power(1.0), YoungFunction::power(2.0),
                                          YoungFunction::power(3.0), YoungFunction::exponential(),
                                          YoungFunction::hinge(0.5)};
    const std::vector<RadialWeight> weights{RadialWeight::gaussian(1.0), RadialWeight::algebraic(3.0),
                                            RadialWeight::truncated(1.5)};
    SuiteCheck pointwise{"two_point_nonpositive"}, functional{"young_functional_monotone"};
    constexpr double eps = std::numeric_limits<double>::epsilon();
    for (std::size_t n = 0; n < trials; ++n) {
        const int dim = n % 2 == 0 ? 1 : 2;
        // Smaller amplitude keeps exp(t) - 1 well scaled.
        GridFunction u = random_for(d, dim, false);
        for (double& v : u.mutable_values()) v = std::round(0.5 * v / kQuantum) * kQuantum;
        const GridAlignedHalfSpace h = random_half_space(d, dim);
        const Reflection r(u.spec(), h);
        const Partition part = partition_abcd(u, h);
        const GridFunction uh = polarize(u, h);
        for (const YoungFunction& g : menu) {
            double worst = 0.0;
            bool bad = false;
            for (std::size_t x : part.a) {
                const std::size_t sx = *r.image(x);
                for (std::size_t y : part.b) {
                    const std::size_t sy = *r.image(y);
                    const double dh = young_two_point(u, r, x, y, g);
                    const double scale = g(std::fabs(u[sx] - u[y])) + g(std::fabs(u[x] - u[sy])) +
                                         g(std::fabs(u[x] - u[y])) + g(std::fabs(u[sx] - u[sy]));
                    const double excess = scale == 0.0 ? (dh > 0.0 ? 1.0 : 0.0) : dh / scale;
                    worst = std::max(worst, excess);
                    if (dh > 4.0 * eps * scale) bad = true;
                }
            }
            ++pointwise.cases;
            pointwise.worst = std::max(pointwise.worst, worst);
            if (bad) ++pointwise.failures;
            for (const RadialWeight& w : weights) {
                const double ju = young_weight_functional(u, g, w);
                const double juh = young_weight_functional(uh, g, w);
                record(functional, ju == 0.0 ? (juh > 0.0 ? 1.0 : 0.0) : (juh - ju) / ju, 1e-12);
            }
        }
    }
    return {pointwise, functional};
}

std::vector<SuiteCheck> gagliardo_suite(std::size_t trials, std::uint64_t seed) {
    Draw d(seed);
    SuiteCheck pol{"seminorm_polarization"}, rea{"seminorm_rearrangement"};
    const KernelParams prm{2.0, 1.0, 0.4};
    constexpr double tol = 1e-8;
    for (std::size_t n = 0; n < trials; ++n) {
        const int dim = n % 2 == 0 ? 1 : 2;
        const GridFunction u = random_for(d, dim, true);
        const GridAlignedHalfSpace h = random_half_space(d, dim);
        const double gu = gagliardo_seminorm_p(u, prm).value();
        const double gh = gagliardo_seminorm_p(polarize(u, h), prm).value();
        const double gs = gagliardo_seminorm_p(schwarz_rearrange(u), prm).value();
        record(pol, gu == 0.0 ? 0.0 : (gh - gu) / gu, tol);
        record(rea, gu == 0.0 ? 0.0 : (gs - gu) / gu, tol);
    }
    return {pol, rea};
}

std::vector<SuiteCheck> structural_suite(std::size_t trials, std::uint64_t seed) {
    Draw d(seed);
    SuiteCheck multiset{"multiset"}, idem{"idempotence"}, equi{"equimeasurable"}, contr{"contraction"};
    for (std::size_t n = 0; n < trials; ++n) {
        const int dim = n % 2 == 0 ? 1 : 2;
        const GridFunction u = random_for(d, dim, false);
        const GridFunction v = random_for(d, dim, false);
        const GridAlignedHalfSpace h = random_half_space(d, dim);
        const GridFunction uh = polarize(u, h);
        record(multiset, sorted_values(uh) == sorted_values(u) ? 0.0 : 1.0, 0.0);
        record(idem, polarize(uh, h) == uh ? 0.0 : 1.0, 0.0);
        const DistributionFunction du(u), ds(schwarz_rearrange(u));
        const bool same = std::ranges::equal(du.levels(), ds.levels()) && std::ranges::equal(du.measures(), ds.measures());
        record(equi, same ? 0.0 : 1.0, 0.0);
        const double p = std::array{1.0, 1.5, 2.0, 3.0}[static_cast<std::size_t>(d.integer(0, 3))];
        const ContractionCheck c = polarization_contraction_check(u, v, h, p);
        // Same multiset of |differences| summed in another order.
        record(contr, c.rhs == 0.0 ? c.lhs : (c.lhs - c.rhs) / c.rhs, 1e-14);
    }
    return {multiset, idem, equi, contr};
}

std::vector<SuiteCheck> decay_bound_suite(std::size_t trials, std::uint64_t seed) {
    Draw d(seed);
    SuiteCheck lorentz{"lemma_lorentz"}, weak{"lemma_weak"}, radial{"radial_lp"}, tail{"tail_bound"};
    constexpr double tol = 1e-12;
    for (std::size_t n = 0; n < trials; ++n) {
        const int dim = n % 2 == 0 ? 1 : 2;
        const GridSpec spec = dim == 1 ? GridSpec(1, 4.0, 64) : GridSpec(2, 3.0, 24);
        const GridFunction u = schwarz_rearrange(random_function(d, spec, true, 1.0, 0.6, 1.5, 1.0));
        const double q = d.uniform(1.0, 3.0);
        const double theta = std::array{1.0, 2.0, q}[static_cast<std::size_t>(d.integer(0, 2))];
        const double k_theta = pointwise_decay_bound(u, q, theta);
        const double k_weak = pointwise_decay_bound(u, q, std::numeric_limits<double>::infinity());
        const double omega = unit_ball_volume(dim);
        const double norm_p = std::pow(lp_norm(u, q), q);
        double w_l = 0.0, w_w = 0.0, w_r = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            const Point c = spec.center(i);
            const double r = std::hypot(c[0], c[1]);
            const double decay = std::pow(r, -dim / q);
            if (u[i] == 0.0) continue;
            w_l = std::max(w_l, (u[i] - k_theta * decay) / u[i]);
            w_w = std::max(w_w, (u[i] - k_weak * decay) / u[i]);
            w_r = std::max(w_r, (std::pow(u[i], q) * omega * std::pow(r, dim) - norm_p) / norm_p);
        }
        record(lorentz, w_l, tol);
        record(weak, w_w, tol);
        record(radial, w_r, tol);
        const double r_exp = q * d.uniform(1.1, 3.0);
        const TailBound t = tail_norm_bound_check(u, q, r_exp, d.uniform(0.0, 2.0));
        record(tail, t.rhs == 0.0 ? t.lhs : (t.lhs - t.rhs) / t.rhs, tol);
    }
    return {lorentz, weak, radial, tail};
}

StudyReport inequality_suite(std::size_t trials, std::uint64_t seed) {
    StudyReport rep;
    rep.name = "inequality_suite";
    rep.anchor = "polarization inequalities";
    rep.parameters = {{"trials", trials}, {"seed", seed}};
    rep.columns = {"check", "cases", "failures", "skipped", "worst"};
    std::vector<SuiteCheck> all;
    auto append = [&all](std::vector<SuiteCheck> v) { all.insert(all.end(), v.begin(), v.end()); };
    append(decomposition_suite(std::max<std::size_t>(1, trials / 2), 5, seed));
    append(young_suite(trials, seed + 1));
    append(gagliardo_suite(std::max<std::size_t>(1, trials / 2), seed + 2));
    append(structural_suite(trials, seed + 3));
    append(decay_bound_suite(trials, seed + 4));
    nlohmann::json names = nlohmann::json::array();
    bool ok = true;
    for (std::size_t i = 0; i < all.size(); ++i) {
        const SuiteCheck& c = all[i];
        names.push_back(c.name);
        ok = ok && c.passed();
        rep.add_row({static_cast<double>(i), static_cast<double>(c.cases), static_cast<double>(c.failures),
                     static_cast<double>(c.skipped), c.worst});
    }
    rep.summary = {{"checks", names}, {"all_passed", ok}};
    return rep;
}

}  // namespace nlab

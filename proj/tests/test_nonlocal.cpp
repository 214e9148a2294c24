#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "nlab/errors.hpp"
#include "nlab/nonlocal.hpp"
#include "nlab/oracle.hpp"

using namespace nlab;

namespace {

// int over the cell [a, b] of int_{|y| > L} |x - y|^(-1-alpha) dy, alpha != 1
double exterior_1d(double a, double b, double L, double alpha) {
    auto F = [&](double r) { return std::pow(r, 1.0 - alpha) / (alpha * (alpha - 1.0)); };
    return F(L - b) - F(L - a) + F(L + a) - F(L + b);
}

// O(M^2) reference over all cell pairs and the exterior.
double naive_pair_sum_1d(const GridFunction& u, double alpha, const std::function<double(double, double)>& phi) {
    const GridSpec& g = u.spec();
    const int m = g.cells_per_axis();
    const double h = g.h(), L = g.half_width();
    long double s = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = 0; j < m; ++j) {
            if (i == j) continue;
            const double w = phi(u.at(i), u.at(j));
            if (w == 0.0) continue;
            s += w * interval_pair_integral((std::abs(i - j) - 1) * h, h, h, alpha);
        }
        const double w = phi(u.at(i), 0.0);
        if (w != 0.0) s += 2.0L * w * exterior_1d(g.lower_edge(i), g.lower_edge(i) + h, L, alpha);
    }
    return static_cast<double>(s);
}

double naive_pair_sum_2d(const GridFunction& u, double alpha, const std::function<double(double, double)>& phi) {
    const auto k = power_kernel(u.spec(), alpha);
    long double s = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const CellIndex a = u.spec().unflat(i);
        for (std::size_t j = 0; j < u.size(); ++j) {
            if (i == j) continue;
            const double w = phi(u[i], u[j]);
            if (w == 0.0) continue;
            const CellIndex b = u.spec().unflat(j);
            s += w * k->cell_pair(b.i0 - a.i0, b.i1 - a.i1);
        }
        const double w = phi(u[i], 0.0);
        if (w != 0.0) s += 2.0L * w * k->cell_exterior(i);
    }
    return static_cast<double>(s);
}

PiecewiseLinear pieces_of(const GridFunction& u) {
    std::vector<LinearPiece> p;
    const GridSpec& g = u.spec();
    for (int i = 0; i < g.cells_per_axis(); ++i)
        if (u.at(i) != 0.0) p.push_back({g.lower_edge(i), g.lower_edge(i) + g.h(), u.at(i), u.at(i)});
    return PiecewiseLinear(p);
}

GridFunction smooth_random(const GridSpec& g, std::mt19937_64& rng, double amplitude) {
    std::uniform_real_distribution<double> c(-0.8, 0.8), a(-1.0, 1.0);
    const double c0 = c(rng), c1 = c(rng), a0 = a(rng), a1 = a(rng);
    auto u = GridFunction::sample(g, [&](Point x) {
        const double r0 = (x[0] - c0) * (x[0] - c0) + (g.dim() == 2 ? x[1] * x[1] : 0.0);
        const double r1 = (x[0] - c1) * (x[0] - c1) + (g.dim() == 2 ? (x[1] - 0.3) * (x[1] - 0.3) : 0.0);
        return amplitude * (a0 * std::exp(-2 * r0) + a1 * std::exp(-3 * r1));
    });
    for (double& v : u.mutable_values()) v = std::round(v * 16) / 16;
    return u;
}

}  // namespace

TEST_SUITE("nonlocal") {

TEST_CASE("energy value") {
    CHECK(EnergyValue::finite(2.5).value() == 2.5);
    CHECK(EnergyValue::divergent().is_divergent());
    CHECK(std::isinf(EnergyValue::divergent().value_or_inf()));
    CHECK_THROWS_AS(EnergyValue::divergent().value(), NumericalFailure);
    CHECK(EnergyValue::divergent().to_string() == "divergent");
}

TEST_CASE("angular constant") {
    CHECK(knp_constant(1, 2.0) == 2.0);
    CHECK(knp_constant(1, 3.7) == 2.0);
    CHECK(knp_constant(2, 2.0) == doctest::Approx(std::numbers::pi));
    CHECK(knp_constant(2, 1.0) == doctest::Approx(4.0));
}

TEST_CASE("I_delta trivial cases") {
    const GridSpec g(1, 2.0, 16);
    const KernelParams k{2.0, 0.5, 0.5};
    CHECK(i_delta(GridFunction(g), k).value() == 0.0);
    GridFunction jump(g);
    for (std::size_t i = 4; i < 12; ++i) jump[i] = 1.0;
    CHECK(i_delta(jump, k).is_divergent());
    KernelParams wide = k;
    wide.delta = 1.0;  // strict level set: |u(x) - u(y)| = delta does not count
    CHECK(i_delta(jump, wide).value() == 0.0);
}

TEST_CASE("I_delta matches the naive pair sum in 1D and the oracle on step functions") {
    std::mt19937_64 rng(3);
    const GridSpec g(1, 3.0, 48);
    for (double p : {1.0, 1.5, 2.0})
        for (int t = 0; t < 6; ++t) {
            const auto u = smooth_random(g, rng, 2.0);
            const double delta = 0.4;
            const KernelParams k{p, delta, 0.5};
            const auto e = i_delta(u, k);
            const auto o = oracle_i_delta(pieces_of(u), delta, p);
            REQUIRE(e.is_finite() == o.is_finite());
            if (!e.is_finite()) continue;
            CHECK(e.value() == doctest::Approx(o.value()).epsilon(1e-11));
            if (p != 1.0) {
                const double dp = std::pow(delta, p);
                const double naive =
                    naive_pair_sum_1d(u, p, [&](double a, double b) { return std::fabs(a - b) > delta ? dp : 0.0; });
                CHECK(e.value() == doctest::Approx(naive).epsilon(1e-11));
            }
        }
}

TEST_CASE("I_delta matches the naive pair sum in 2D") {
    std::mt19937_64 rng(4);
    const GridSpec g(2, 2.0, 12);
    for (int t = 0; t < 4; ++t) {
        const auto u = smooth_random(g, rng, 1.5);
        const KernelParams k{2.0, 0.45, 0.5};
        const double dp = k.delta * k.delta;
        const auto e = i_delta(u, k);
        if (!e.is_finite()) continue;
        const double naive =
            naive_pair_sum_2d(u, 2.0, [&](double a, double b) { return std::fabs(a - b) > k.delta ? dp : 0.0; });
        CHECK(e.value() == doctest::Approx(naive).epsilon(1e-11));
    }
}

TEST_CASE("Gagliardo seminorm of step functions") {
    std::mt19937_64 rng(5);
    for (int dim : {1, 2}) {
        const GridSpec g(dim, 2.0, dim == 1 ? 32 : 10);
        const auto u = smooth_random(g, rng, 1.0);
        const KernelParams k{2.0, 1.0, 0.4};
        const double alpha = k.p * k.s;
        auto phi = [](double a, double b) { return (a - b) * (a - b); };
        const double naive = dim == 1 ? naive_pair_sum_1d(u, alpha, phi) : naive_pair_sum_2d(u, alpha, phi);
        CHECK(gagliardo_seminorm_p(u, k, NearField::PiecewiseConstant).value() ==
              doctest::Approx(naive).epsilon(1e-11));
    }
}

TEST_CASE("seminorm of a Gaussian against its Fourier value") {
    // [exp(-x^2)]^2 = 2 A 2^(s + 1/2) Gamma(s + 1/2), A = int_0^inf (1 - cos t) t^(-1-2s) dt
    auto f = [](Point x) { return std::exp(-x[0] * x[0]); };
    for (double s : {0.3, 0.5, 0.75}) {
        const double A = s == 0.5 ? std::numbers::pi / 2 : -std::tgamma(-2 * s) * std::cos(std::numbers::pi * s);
        const double exact = 2 * A * std::pow(2.0, s + 0.5) * std::tgamma(s + 0.5);
        const KernelParams k{2.0, 1.0, s};
        std::vector<double> err;
        double last = 0.0, prev = 0.0;
        for (int m : {160, 320, 640}) {
            auto u = GridFunction::sample(GridSpec(1, 8.0, m), f);
            u[0] = u[u.size() - 1] = 0.0;
            prev = last;
            last = gagliardo_seminorm_p(u, k).value();
            err.push_back(std::fabs(last / exact - 1));
        }
        CHECK(err[1] < err[0]);
        CHECK(err[2] < err[1]);
        CHECK(err[2] < 0.02);
        if (s == 0.5) CHECK(std::fabs(last / prev - 1) < 0.01);
    }
    auto edge = GridFunction::sample(GridSpec(1, 8.0, 160), f);
    CHECK(gagliardo_seminorm_p(edge, {2.0, 1.0, 0.75}).is_divergent());
    CHECK_THROWS_AS(gagliardo_seminorm_p(GridFunction(GridSpec(2, 1.0, 4)), {2.0, 1.0, 0.75}, NearField::LocalLinear),
                    GuardViolation);
}

TEST_CASE("Young functions and weights") {
    CHECK(YoungFunction::power(2.0)(3.0) == 9.0);
    CHECK(YoungFunction::exponential()(0.0) == 0.0);
    CHECK(YoungFunction::hinge(0.5)(0.25) == 0.0);
    CHECK(YoungFunction::hinge(0.5)(2.0) == 1.5);
    CHECK(RadialWeight::truncated(1.0)(0.5) == 1.0);
    CHECK(RadialWeight::truncated(1.0)(1.5) == 0.0);
    CHECK(RadialWeight::gaussian(1.0).l1_norm(1) == doctest::Approx(std::sqrt(2 * std::numbers::pi)));
    CHECK(RadialWeight::gaussian(1.0).l1_norm(2) == doctest::Approx(2 * std::numbers::pi));
    CHECK(RadialWeight::algebraic(3.0).l1_norm(1) == doctest::Approx(1.0));

    const GridSpec g(1, 2.0, 16);
    auto u = GridFunction::sample(g, [](Point x) { return std::max(0.0, 1.0 - std::fabs(x[0])); });
    const auto w = RadialWeight::gaussian(0.7);
    const double j1 = young_weight_functional(u, YoungFunction::power(2.0), w);
    GridFunction u2 = u;
    for (double& v : u2.mutable_values()) v *= 2.0;
    CHECK(young_weight_functional(u2, YoungFunction::power(2.0), w) == doctest::Approx(4.0 * j1).epsilon(1e-13));
    CHECK(young_weight_functional(GridFunction(g), YoungFunction::exponential(), w) == 0.0);
}

TEST_CASE("two-point defect terms") {
    const GridSpec g(1, 2.0, 8);
    const GridFunction u(g, {0, 1.5, 3, 1.5, 1, 2.5, 3, 1.5});
    const KernelParams k{2.0, 1.5, 0.5};
    CHECK(script_L(u, 2, 0, k) == 2.25);
    CHECK(script_L(u, 2, 1, k) == 0.0);
    const GridAlignedHalfSpace h{0, 0, Side::Lower};
    // x = 0 in A, y = 2 in B, sx = 7, sy = 5: only |u(x) - u(sy)| and |u(x) - u(y)| exceed delta
    CHECK(script_D_delta(u, h, 0, 2, k) == 0.0);
    CHECK(polarize(u, h) != u);
    const auto d = defect(u, h, k);
    const auto iu = i_delta(u, k), ih = i_delta(polarize(u, h), k);
    REQUIRE(iu.is_finite());
    REQUIRE(ih.is_finite());
    CHECK(d.value() == doctest::Approx(0.5 * (ih.value() - iu.value())).scale(iu.value()).epsilon(1e-12));
}

TEST_CASE("limit helpers reject coarse grids") {
    const GridSpec g(1, 4.0, 64);
    const auto u = GridFunction::sample(g, [](Point x) { return std::exp(-x[0] * x[0]); });
    const double ok[] = {1.0}, bad[] = {0.5};
    CHECK_NOTHROW(ng_limit_estimate(u, 2.0, ok));
    CHECK_THROWS_AS(ng_limit_estimate(u, 2.0, bad), GuardViolation);
    const auto sob = sobolev_ratio(GridFunction::sample(GridSpec(2, 3.0, 24),
                                                        [](Point x) { return std::exp(-x[0] * x[0] - x[1] * x[1]); }),
                                   {1.5, 0.3, 0.5}, 1.0);
    CHECK(std::isfinite(sob.ratio));
    CHECK(sob.ratio > 0.0);
}

}

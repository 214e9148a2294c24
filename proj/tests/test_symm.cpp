#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "nlab/errors.hpp"
#include "nlab/symm.hpp"

using namespace nlab;

namespace {

GridFunction random_grid(const GridSpec& g, std::mt19937_64& rng, bool nonnegative) {
    std::uniform_int_distribution<int> d(nonnegative ? 0 : -4, 4);
    GridFunction u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = 0.25 * d(rng);
    return u;
}

std::vector<double> sorted(const GridFunction& u) {
    std::vector<double> v(u.values().begin(), u.values().end());
    std::sort(v.begin(), v.end());
    return v;
}

// u^H from the definition, by brute force over cells.
GridFunction reference_polarization(const GridFunction& u, const GridAlignedHalfSpace& h) {
    const GridSpec& g = u.spec();
    const HalfSpace geo = h.geometric(g);
    GridFunction out(g);
    for (std::size_t i = 0; i < u.size(); ++i) {
        const Point x = g.center(i);
        const Point sx = geo.reflect(x);
        double mirror = 0.0;
        for (std::size_t j = 0; j < u.size(); ++j) {
            const Point y = g.center(j);
            if (std::fabs(y[0] - sx[0]) < 1e-9 && std::fabs(y[1] - sx[1]) < 1e-9) mirror = u[j];
        }
        out[i] = geo.contains(x) ? std::max(u[i], mirror) : std::min(u[i], mirror);
    }
    return out;
}

}  // namespace

TEST_SUITE("symm") {

TEST_CASE("half-space geometry and reflection") {
    const GridSpec g(1, 2.0, 8);
    const GridAlignedHalfSpace lower{0, 1, Side::Lower};
    const HalfSpace geo = lower.geometric(g);
    CHECK(geo.offset == 0.5);
    CHECK(geo.contains({0.4, 0.0}));
    CHECK_FALSE(geo.contains({0.6, 0.0}));
    CHECK(geo.reflect({0.0, 0.0})[0] == doctest::Approx(1.0));
    const Reflection r(g, lower);
    CHECK(r.boundary() == 5);
    CHECK(r.image(4) == std::optional<std::size_t>(5));
    CHECK(r.image(2) == std::optional<std::size_t>(7));
    CHECK_FALSE(r.image(1).has_value());
    CHECK(r.fixed(0));
    CHECK(r.fixed(1));
    CHECK_FALSE(r.in_h(6));
}

TEST_CASE("polarization matches the definition") {
    std::mt19937_64 rng(7);
    for (int dim : {1, 2}) {
        const GridSpec g(dim, 2.0, 8);
        for (int trial = 0; trial < 20; ++trial) {
            const auto u = random_grid(g, rng, true);
            for (int axis = 0; axis < dim; ++axis)
                for (int c = 0; c < 4; ++c)
                    for (Side side : {Side::Lower, Side::Upper}) {
                        const GridAlignedHalfSpace h{axis, c, side};
                        CHECK(polarize(u, h) == reference_polarization(u, h));
                    }
        }
    }
}

TEST_CASE("hand example") {
    const GridSpec g(1, 2.0, 4);
    const GridFunction u(g, {1, 2, 3, 4});
    CHECK(polarize(u, {0, 0, Side::Lower}) == GridFunction(g, {4, 3, 2, 1}));
    CHECK(polarize(u, {0, 0, Side::Upper}) == u);
    // H = (-inf, 1]: cells 2 and 3 swap, cells 0 and 1 mirror into the exterior
    CHECK(polarize(u, {0, 1, Side::Lower}) == GridFunction(g, {1, 2, 4, 3}));
}

TEST_CASE("negative values on cells with an exterior mirror are rejected") {
    const GridSpec g(1, 2.0, 8);
    GridFunction u(g);
    u[0] = -1.0;
    CHECK_THROWS_AS(polarize(u, {0, 2, Side::Lower}), GuardViolation);
    u[0] = 1.0;
    CHECK_NOTHROW(polarize(u, {0, 2, Side::Lower}));
}

TEST_CASE("partition") {
    const GridSpec g(1, 2.0, 8);
    const GridFunction u(g, {0, 0, 1, 3, 2, 1, 0, 0});
    const auto p = partition_abcd(u, {0, 0, Side::Lower});
    // H cells 0..3 pair with 7..4
    CHECK(p.a == std::vector<std::size_t>{0, 1, 2});
    CHECK(p.b == std::vector<std::size_t>{3});
    CHECK(p.d == std::vector<std::size_t>{4});
    CHECK(p.f.empty());
    const Region o1 = p.o1(g);
    CHECK(o1.exterior);
    CHECK(o1.count() == 6);
    CHECK(p.o2(g).count() == 2);
    CHECK_THROWS_AS(partition_abcd(GridFunction(g, {1, 0, 0, 0, 0, 0, 0, 0}), {0, 2, Side::Lower}), GuardViolation);
}

TEST_CASE("structural properties") {
    std::mt19937_64 rng(11);
    for (int dim : {1, 2}) {
        const GridSpec g(dim, 2.0, dim == 1 ? 16 : 8);
        for (int t = 0; t < 30; ++t) {
            const auto u = random_grid(g, rng, true);
            const auto v = random_grid(g, rng, true);
            const GridAlignedHalfSpace h{dim == 2 ? t % 2 : 0, t % 3, t % 3 == 0 ? Side::Lower : Side::Upper};
            const auto uh = polarize(u, h);
            CHECK(sorted(uh) == sorted(u));
            CHECK(polarize(uh, h) == uh);
            for (double p : {1.0, 2.0, 3.0}) CHECK(polarization_contraction_check(u, v, h, p).holds);
            const auto star = schwarz_rearrange(u);
            CHECK(is_radially_decreasing(star));
            CHECK(sorted(star) == sorted(abs(u)));
            CHECK(schwarz_rearrange(star) == star);
            CHECK(polarize(star, h) == star);
        }
    }
}

TEST_CASE("rearrangement of a signed function uses |u|") {
    const GridSpec g(1, 2.0, 4);
    const auto r = schwarz_rearrangement(GridFunction(g, {-3, 1, 0, 2}));
    CHECK(r.used_absolute_value);
    CHECK(r.function == GridFunction(g, {1, 3, 2, 0}));
}

TEST_CASE("resampled polarization agrees on grid-aligned half-spaces") {
    std::mt19937_64 rng(5);
    const GridSpec g(2, 2.0, 8);
    const auto u = random_grid(g, rng, true);
    for (int c = 0; c < 3; ++c) {
        const GridAlignedHalfSpace h{1, c, Side::Lower};
        CHECK(polarize_resampled(u, h.geometric(g)) == polarize(u, h));
    }
}

TEST_CASE("schedule") {
    const GridSpec g(2, 2.0, 8);
    const HalfSpaceSchedule a(g, 1), b(g, 1), c(g, 2);
    // axes x offsets {0..3} x sides, Lower only at offset 0
    CHECK(a.period() == 2 * (1 + 3 * 2));
    CHECK(std::ranges::equal(a.cycle(), b.cycle()));
    CHECK_FALSE(std::ranges::equal(a.cycle(), c.cycle()));
    for (const auto& h : a.cycle())
        if (h.offset_cells == 0) CHECK(h.side == Side::Lower);
    CHECK(a[3] == a[3 + a.period()]);
}

TEST_CASE("iterated polarization is monotone and fixes u*") {
    const GridSpec g(2, 3.0, 24);
    const auto u0 = GridFunction::sample(g, [](Point x) {
        const double r2 = (x[0] - 0.9) * (x[0] - 0.9) + (x[1] - 0.6) * (x[1] - 0.6);
        return r2 < 1.0 ? 1.0 - r2 : 0.0;
    });
    const HalfSpaceSchedule s(g, 3);
    const auto traj = iterate_polarization(u0, s, 60);
    for (std::size_t k = 1; k < traj.errors.size(); ++k) CHECK(traj.errors[k] <= traj.errors[k - 1]);
    CHECK(traj.errors.back() < traj.errors.front());
    const auto fixed = iterate_polarization(traj.target, s, 10);
    for (double e : fixed.errors) CHECK(e == 0.0);
}

}

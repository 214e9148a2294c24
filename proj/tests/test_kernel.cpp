#include <doctest.h>

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "nlab/kernel.hpp"

using namespace nlab;
namespace bq = boost::math::quadrature;

namespace {

template <class F>
double gauss(F f, double a, double b) {
    return bq::gauss_kronrod<double, 61>::integrate(f, a, b, 12, 1e-13);
}

// int over the cell [x0, x0 + h]^2 of int over R^2 minus [-L, L]^2 of |x - y|^(-2 - alpha)
double brute_square_exterior(double x0, double y0, double h, double L, double alpha) {
    auto inner = [&](double px, double py) {
        return gauss(
            [&](double th) {
                const double e0 = std::cos(th), e1 = std::sin(th);
                double r = 1e300;
                if (e0 > 0) r = std::min(r, (L - px) / e0);
                if (e0 < 0) r = std::min(r, (-L - px) / e0);
                if (e1 > 0) r = std::min(r, (L - py) / e1);
                if (e1 < 0) r = std::min(r, (-L - py) / e1);
                return std::pow(r, -alpha) / alpha;
            },
            0.0, 2.0 * std::numbers::pi);
    };
    return bq::gauss<double, 12>::integrate(
        [&](double px) {
            return bq::gauss<double, 12>::integrate([&](double py) { return inner(px, py); }, y0, y0 + h);
        },
        x0, x0 + h);
}

}  // namespace

TEST_SUITE("kernel") {

TEST_CASE("interval pair integral against quadrature") {
    for (double alpha : {-0.5, 0.3, 1.0, 2.0, 3.5})
        for (double gap : {0.0, 0.2, 1.5})
            for (double w : {0.25, 1.0}) {
                if (gap == 0.0 && alpha >= 1.0) {
                    CHECK(std::isinf(interval_pair_integral(gap, w, 0.5, alpha)));
                    continue;
                }
                // F'' = r^(-1-alpha) with F(0) = 0 handles the corner singularity at gap 0.
                auto F = [&](double r) { return std::pow(r, 1.0 - alpha) / (alpha * (alpha - 1.0)); };
                const double ref = gap == 0.0 ? F(w + 0.5) - F(w) - F(0.5)
                                              : gauss(
                                                    [&](double s) {
                                                        return gauss([&](double t) { return std::pow(gap + s + t, -1.0 - alpha); },
                                                                     0.0, 0.5);
                                                    },
                                                    0.0, w);
                CHECK(interval_pair_integral(gap, w, 0.5, alpha) == doctest::Approx(ref).epsilon(1e-10));
            }
}

TEST_CASE("tail difference") {
    for (double alpha : {0.5, 1.0, 2.0}) {
        const double ref = gauss([&](double r) { return std::pow(r, -alpha) / alpha; }, 0.3, 2.0);
        CHECK(power_tail_difference(0.3, 2.0, alpha) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("1D power kernel") {
    const GridSpec g(1, 2.0, 16);
    const double h = g.h();
    for (double alpha : {0.5, 2.0}) {
        const auto k = power_kernel(g, alpha);
        CHECK(k->cell_pair(3) == doctest::Approx(interval_pair_integral(2 * h, h, h, alpha)).epsilon(1e-14));
        CHECK(k->cell_pair(-3) == k->cell_pair(3));
        // int_cell ((L - x)^-alpha + (x + L)^-alpha) / alpha
        const double x0 = g.lower_edge(5);
        const double ref = gauss(
            [&](double x) { return (std::pow(2.0 - x, -alpha) + std::pow(x + 2.0, -alpha)) / alpha; }, x0, x0 + h);
        CHECK(k->cell_exterior(5) == doctest::Approx(ref).epsilon(1e-12));
        const Block a{0, 3}, b{6, 4};
        double sum = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 6; j < 10; ++j) sum += k->cell_pair(j - i);
        CHECK(k->block_pair(a, b) == doctest::Approx(sum).epsilon(1e-12));
    }
    CHECK(std::isinf(power_kernel(g, 1.5)->cell_pair(1)));
}

TEST_CASE("unit square table against tensor Gauss") {
    const double alpha = 0.6;
    for (auto [k0, k1] : {std::pair{3, 1}, std::pair{2, 2}, std::pair{0, 5}}) {
        const double ref = bq::gauss<double, 20>::integrate(
            [&](double x0) {
                return bq::gauss<double, 20>::integrate(
                    [&](double x1) {
                        return bq::gauss<double, 20>::integrate(
                            [&](double y0) {
                                return bq::gauss<double, 20>::integrate(
                                    [&](double y1) {
                                        const double d0 = x0 - y0 - k0, d1 = x1 - y1 - k1;
                                        return std::pow(d0 * d0 + d1 * d1, -1.0 - alpha / 2);
                                    },
                                    0.0, 1.0);
                            },
                            0.0, 1.0);
                    },
                    0.0, 1.0);
            },
            0.0, 1.0);
        CHECK(unit_square_pair(k0, k1, alpha) == doctest::Approx(ref).epsilon(1e-8));
        CHECK(unit_square_pair(-k1, k0, alpha) == doctest::Approx(unit_square_pair(k0, k1, alpha)).epsilon(1e-12));
    }
    // touching squares are integrable for alpha < 1, refining the rule changes little
    const double a = unit_square_pair(1, 0, 0.4), b = unit_square_pair(1, 0, 0.4, 2);
    CHECK(std::isfinite(a));
    CHECK(a == doctest::Approx(b).epsilon(1e-6));
    CHECK(std::isinf(unit_square_pair(1, 0, 1.2)));
}

TEST_CASE("half plane and quadrant integrals") {
    for (double alpha : {0.4, 1.0, 2.5}) {
        const double hp = bq::exp_sinh<double>().integrate([&](double t) { return 2.0 * std::pow(1 + t * t, -1 - alpha / 2); });
        CHECK(half_plane_constant(alpha) == doctest::Approx(hp).epsilon(1e-10));
        const double d1 = 0.7, d2 = 1.3;
        bq::exp_sinh<double> es;
        const double q = es.integrate([&](double t) {
            return es.integrate([&](double s) { return std::pow((d1 + t) * (d1 + t) + (d2 + s) * (d2 + s), -1 - alpha / 2); });
        });
        CHECK(quadrant_integral(d1, d2, alpha) == doctest::Approx(q).epsilon(1e-7));
        const double qc = bq::gauss<double, 20>::integrate(
            [&](double a) {
                return bq::gauss<double, 20>::integrate([&](double b) { return quadrant_integral(a, b, alpha); }, 3.0, 4.0);
            },
            2.0, 3.0);
        CHECK(quadrant_cell_integral(2, 3, alpha) == doctest::Approx(qc).epsilon(1e-9));
    }
}

TEST_CASE("2D power kernel homogeneity and exterior") {
    const GridSpec g(2, 2.0, 8);
    const double h = g.h(), alpha = 0.6;
    const auto k = power_kernel(g, alpha);
    CHECK(k->cell_pair(3, 1) == doctest::Approx(std::pow(h, 2 - alpha) * unit_square_pair(3, 1, alpha)).epsilon(1e-12));
    const std::size_t cell = g.flat({2, 5});
    const double ref = brute_square_exterior(g.lower_edge(2), g.lower_edge(5), h, 2.0, alpha);
    CHECK(k->cell_exterior(cell) == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("tabulated kernel") {
    const GridSpec g(1, 1.0, 4);
    const auto k = tabulated_kernel(g, [](int d0, int) { return 1.0 / (d0 * d0); }, {1, 2, 3, 4});
    CHECK(k->cell_pair(2) == 0.25);
    CHECK(k->cell_exterior(2) == 3.0);
    CHECK(k->block_pair({0, 2}, {2, 2}) == doctest::Approx(0.25 + 1.0 / 9 + 1.0 + 0.25));
}

}

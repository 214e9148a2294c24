#include "nlab/riesz.hpp"

#include <algorithm>
#include <cmath>
#include <array>
#include <complex>
#include <limits>
#include <mutex>
#include <numbers>

#include <boost/math/special_functions/beta.hpp>
#include <fftw3.h>

#include "nlab/errors.hpp"
#include "nlab/parallel.hpp"
#include "quadrature.hpp"

namespace nlab {

namespace {

void check_order(double s) {
    if (!(s > 0.0 && s < 1.0)) throw GuardViolation("fractional order s must lie in (0, 1)");
}

// Generalized binomial coefficient C(a, n).
double binomial(double a, int n) {
    double c = 1.0;
    for (int k = 0; k < n; ++k) c *= (a - k) / (k + 1);
    return c;
}

// Unit-spacing 1D cell moments for offset m >= 1:
// v0 = int_{-1/2}^{1/2} (m + t)^{-1-s} dt, v1 = -int t (m + t)^{-1-s} dt.
struct Moments1D {
    double v0;
    double v1;
};

Moments1D moments_1d(int m, double s) {
    const double md = m;
    if (m < 16) {
        const double v0 = (std::pow(md - 0.5, -s) - std::pow(md + 0.5, -s)) / s;
        const double v1 = md * v0 - (std::pow(md + 0.5, 1.0 - s) - std::pow(md - 0.5, 1.0 - s)) / (1.0 - s);
        return {v0, v1};
    }
    double v0 = 0.0, v1 = 0.0;
    for (int n = 0; n <= 12; n += 2) v0 += binomial(-1.0 - s, n) * std::pow(md, -1.0 - s - n) * std::ldexp(1.0, -n) / (n + 1);
    for (int n = 1; n <= 13; n += 2)
        v1 -= binomial(-1.0 - s, n) * std::pow(md, -1.0 - s - n) * std::ldexp(1.0, -n - 1) / (n + 2);
    return {v0, v1};
}

std::vector<double> central_gradient_1d(const GridFunction& u) {
    const int m = u.spec().cells_per_axis();
    const double h = u.spec().h();
    std::vector<double> g(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) g[static_cast<std::size_t>(i)] = (u.at(i + 1) - u.at(i - 1)) / (2.0 * h);
    return g;
}

std::vector<double> riesz_integral_1d(const GridFunction& u, double s) {
    const auto& spec = u.spec();
    const int m = spec.cells_per_axis();
    const double h = spec.h();
    const double big_l = spec.half_width();
    const auto g = central_gradient_1d(u);
    std::vector<double> v0(static_cast<std::size_t>(m)), v1(static_cast<std::size_t>(m));
    const double s0 = std::pow(h, -s), s1 = std::pow(h, 1.0 - s);
    for (int k = 1; k < m; ++k) {
        const auto mo = moments_1d(k, s);
        v0[static_cast<std::size_t>(k)] = s0 * mo.v0;
        v1[static_cast<std::size_t>(k)] = s1 * mo.v1;
    }
    const double self = 2.0 * std::pow(0.5 * h, 1.0 - s) / (1.0 - s);
    std::vector<double> out(static_cast<std::size_t>(m));
    auto vals = u.values();
    parallel_for(static_cast<std::size_t>(m), [&](std::size_t i) {
        CompensatedSum acc;
        const double ui = vals[i];
        for (std::size_t j = 0; j < static_cast<std::size_t>(m); ++j) {
            if (j == i) continue;
            const bool pos = i > j;
            const std::size_t k = pos ? i - j : j - i;
            const double sign = pos ? 1.0 : -1.0;
            acc += (ui - vals[j]) * sign * v0[k] - g[j] * v1[k];
        }
        acc += g[i] * self;
        const double x = spec.coordinate(static_cast<int>(i));
        acc += ui * (std::pow(x + big_l, -s) - std::pow(big_l - x, -s)) / s;
        out[i] = acc.value();
    });
    return out;
}

// Unit tables for offsets m in [0, M)^2, six components per entry:
// v0_0, v0_1, v1_00, v1_01, v1_10, v1_11.
std::vector<double> unit_tables_2d(int m, double s) {
    std::vector<double> t(static_cast<std::size_t>(m) * m * 6, 0.0);
    parallel_for(static_cast<std::size_t>(m) * m, [&](std::size_t idx) {
        const int k0 = static_cast<int>(idx / m), k1 = static_cast<int>(idx % m);
        if (k0 == 0 && k1 == 0) return;
        const int far = std::max(k0, k1);
        const int n = far <= 2 ? 20 : (far <= 8 ? 12 : 8);
        const double e = 3.0 + s;
        double* out = &t[idx * 6];
        auto kernel = [&](double t0, double t1, int comp) {
            const double z0 = k0 + t0, z1 = k1 + t1;
            const double r = std::pow(z0 * z0 + z1 * z1, -0.5 * e);
            return (comp == 0 ? z0 : z1) * r;
        };
        out[0] = detail::gauss_square(-0.5, -0.5, 1.0, n, [&](double a, double b) { return kernel(a, b, 0); });
        out[1] = detail::gauss_square(-0.5, -0.5, 1.0, n, [&](double a, double b) { return kernel(a, b, 1); });
        out[2] = -detail::gauss_square(-0.5, -0.5, 1.0, n, [&](double a, double b) { return a * kernel(a, b, 0); });
        out[3] = -detail::gauss_square(-0.5, -0.5, 1.0, n, [&](double a, double b) { return b * kernel(a, b, 0); });
        out[4] = -detail::gauss_square(-0.5, -0.5, 1.0, n, [&](double a, double b) { return a * kernel(a, b, 1); });
        out[5] = -detail::gauss_square(-0.5, -0.5, 1.0, n, [&](double a, double b) { return b * kernel(a, b, 1); });
    });
    return t;
}

// int_0^{arcsin sigma} sin^a.
double sine_power_integral(double a, double sigma) {
    if (sigma <= 0.0) return 0.0;
    const double x = std::min(1.0, sigma * sigma);
    return 0.5 * boost::math::beta((a + 1.0) / 2.0, 0.5, x);
}

// int over {w0 > d0, w1 > d1} of (w0, w1) |w|^{-3-s}.
std::array<double, 2> quadrant_moment(double d0, double d1, double s) {
    const double a = 1.0 + s;
    const double r = std::hypot(d0, d1);
    const double sn = d1 / r, cs = d0 / r;
    const double c0 = (std::pow(d1, -s) * std::pow(sn, a) / a + std::pow(d0, -s) * sine_power_integral(a, cs)) / s;
    const double c1 = (std::pow(d0, -s) * std::pow(cs, a) / a + std::pow(d1, -s) * sine_power_integral(a, sn)) / s;
    return {c0, c1};
}

// int_{R^2 \ [-L, L]^2} (x - y) |x - y|^{-3-s} dy.
std::array<double, 2> exterior_tail_2d(Point x, double big_l, double s) {
    const double b = boost::math::beta(0.5, 1.0 + 0.5 * s);
    std::array<double, 2> t{0.0, 0.0};
    for (int a = 0; a < 2; ++a)
        for (int eps : {-1, 1}) t[static_cast<std::size_t>(a)] -= eps * b * std::pow(big_l - eps * x[static_cast<std::size_t>(a)], -s) / s;
    for (int e0 : {-1, 1})
        for (int e1 : {-1, 1}) {
            const auto q = quadrant_moment(big_l - e0 * x[0], big_l - e1 * x[1], s);
            t[0] += e0 * q[0];
            t[1] += e1 * q[1];
        }
    return t;
}

std::vector<double> riesz_integral_2d(const GridFunction& u, double s) {
    const auto& spec = u.spec();
    const int m = spec.cells_per_axis();
    const double h = spec.h();
    const std::size_t n = spec.size();
    std::vector<double> g(2 * n);
    for (int i0 = 0; i0 < m; ++i0)
        for (int i1 = 0; i1 < m; ++i1) {
            const std::size_t f = spec.flat({i0, i1});
            g[2 * f] = (u.at(i0 + 1, i1) - u.at(i0 - 1, i1)) / (2.0 * h);
            g[2 * f + 1] = (u.at(i0, i1 + 1) - u.at(i0, i1 - 1)) / (2.0 * h);
        }
    const auto table = unit_tables_2d(m, s);
    const double s0 = std::pow(h, -s), s1 = std::pow(h, 1.0 - s);
    const double i_sq = detail::homogeneous_unit_square(-1.0 - s, 20, [&](double a, double b) {
        return std::pow(a * a + b * b, -0.5 * (1.0 + s));
    });
    const double self = 2.0 * std::pow(0.5 * h, 1.0 - s) * i_sq;
    auto vals = u.values();
    std::vector<double> out(2 * n);
    parallel_for(n, [&](std::size_t i) {
        const auto ci = spec.unflat(i);
        CompensatedSum r0, r1;
        const double ui = vals[i];
        for (int j0 = 0; j0 < m; ++j0) {
            const int k0 = ci.i0 - j0;
            const double e0 = k0 < 0 ? -1.0 : 1.0;
            const int a0 = std::abs(k0);
            for (int j1 = 0; j1 < m; ++j1) {
                const int k1 = ci.i1 - j1;
                if (k0 == 0 && k1 == 0) continue;
                const double e1 = k1 < 0 ? -1.0 : 1.0;
                const int a1 = std::abs(k1);
                const double* t = &table[(static_cast<std::size_t>(a0) * m + a1) * 6];
                const std::size_t j = static_cast<std::size_t>(j0) * m + j1;
                const double du = ui - vals[j];
                const double g0 = g[2 * j], g1 = g[2 * j + 1];
                r0 += s0 * du * e0 * t[0] - s1 * (t[2] * g0 + e0 * e1 * t[3] * g1);
                r1 += s0 * du * e1 * t[1] - s1 * (e0 * e1 * t[4] * g0 + t[5] * g1);
            }
        }
        r0 += self * g[2 * i];
        r1 += self * g[2 * i + 1];
        const auto tail = exterior_tail_2d(spec.center(i), spec.half_width(), s);
        r0 += ui * tail[0];
        r1 += ui * tail[1];
        out[2 * i] = r0.value();
        out[2 * i + 1] = r1.value();
    });
    return out;
}

std::vector<double> riesz_integral(const GridFunction& u, double s) {
    check_order(s);
    return u.spec().dim() == 1 ? riesz_integral_1d(u, s) : riesz_integral_2d(u, s);
}

std::mutex& fftw_planner_mutex() {
    static std::mutex m;
    return m;
}

}  // namespace

Point FractionalGradientField::at(std::size_t flat) const noexcept {
    if (spec.dim() == 1) return {vectors[flat], 0.0};
    return {vectors[2 * flat], vectors[2 * flat + 1]};
}

double FractionalGradientField::norm(std::size_t flat) const noexcept {
    const auto v = at(flat);
    return std::hypot(v[0], v[1]);
}

double riesz_constant(int dim, double s) {
    check_order(s);
    if (dim != 1 && dim != 2) throw GuardViolation("dimension must be 1 or 2");
    return std::pow(2.0, s) * std::tgamma(0.5 * (dim + s + 1.0)) /
           (std::pow(std::numbers::pi, 0.5 * dim) * std::tgamma(0.5 * (1.0 - s)));
}

FractionalGradientField fractional_gradient(const GridFunction& u, double s) {
    auto raw = riesz_integral(u, s);
    const double c = riesz_constant(u.spec().dim(), s);
    for (double& v : raw) v *= c;
    return {u.spec(), s, c, std::move(raw)};
}

FractionalGradientField spectral_oracle_1d(const GridFunction& u, double s, int padding) {
    check_order(s);
    if (u.spec().dim() != 1) throw GuardViolation("spectral oracle is one-dimensional");
    if (padding < 1) throw GuardViolation("padding must be at least 1");
    const std::size_t m = u.size();
    const std::size_t n = m * static_cast<std::size_t>(padding);
    const std::size_t nc = n / 2 + 1;
    double* in = fftw_alloc_real(n);
    fftw_complex* spec_buf = fftw_alloc_complex(nc);
    fftw_plan fwd, bwd;
    {
        std::lock_guard lock(fftw_planner_mutex());
        fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), in, spec_buf, FFTW_ESTIMATE);
        bwd = fftw_plan_dft_c2r_1d(static_cast<int>(n), spec_buf, in, FFTW_ESTIMATE);
    }
    std::fill(in, in + n, 0.0);
    std::copy(u.values().begin(), u.values().end(), in);
    fftw_execute(fwd);
    const double period = static_cast<double>(n) * u.spec().h();
    for (std::size_t k = 0; k < nc; ++k) {
        if (k == 0 || (n % 2 == 0 && k == n / 2)) {
            spec_buf[k][0] = spec_buf[k][1] = 0.0;
            continue;
        }
        const double xi = static_cast<double>(k) / period;
        const std::complex<double> z(spec_buf[k][0], spec_buf[k][1]);
        const auto w = z * std::complex<double>(0.0, std::pow(2.0 * std::numbers::pi * xi, s));
        spec_buf[k][0] = w.real();
        spec_buf[k][1] = w.imag();
    }
    fftw_execute(bwd);
    std::vector<double> out(m);
    for (std::size_t i = 0; i < m; ++i) out[i] = in[i] / static_cast<double>(n);
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(fwd);
        fftw_destroy_plan(bwd);
    }
    fftw_free(in);
    fftw_free(spec_buf);
    return {u.spec(), s, riesz_constant(1, s), std::move(out)};
}

GridFunction j_functional(const GridFunction& u, double s, double p) {
    if (!(p >= 1.0)) throw GuardViolation("p must be at least 1");
    const auto raw = riesz_integral(u, s);
    GridFunction out(u.spec());
    const bool two = u.spec().dim() == 2;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double r = two ? std::hypot(raw[2 * i], raw[2 * i + 1]) : std::fabs(raw[i]);
        out[i] = std::pow(r, p);
    }
    return out;
}

VWDecomposition vw_decomposition(const GridFunction& u, const GridAlignedHalfSpace& h) {
    const Reflection refl(u.spec(), h);
    const auto uh = polarize(u, h);
    GridFunction v(u.spec()), w(u.spec());
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (refl.fixed(i) && u[i] != 0.0) throw GuardViolation("u must vanish on cells of H mirrored outside the grid");
        if (const auto j = refl.image(i)) {
            v[i] = u[*j];
            w[i] = uh[*j];
        }
    }
    return {std::move(v), std::move(w)};
}

KeycondReport keycond_probe(const GridFunction& u, const GridAlignedHalfSpace& h, double s, double p,
                            double rel_tolerance) {
    const Reflection refl(u.spec(), h);
    const auto [v, w] = vw_decomposition(u, h);
    const auto uh = polarize(u, h);
    const auto ju = j_functional(u, s, p), jv = j_functional(v, s, p);
    const auto juh = j_functional(uh, s, p), jw = j_functional(w, s, p);
    const double vol = u.spec().cell_volume();

    KeycondReport rep{};
    rep.tolerance = rel_tolerance;
    double scale = 0.0;
    CompensatedSum su, sv, sa, sl, sr;
    for (std::size_t i = 0; i < u.size(); ++i) {
        sa += ju[i];
        if (!refl.in_h(i)) continue;
        const double lhs = juh[i] + jw[i], rhs = ju[i] + jv[i];
        rep.cells.push_back({i, lhs, rhs, false});
        scale = std::max(scale, rhs);
        su += ju[i];
        sv += jv[i];
        sl += lhs;
        sr += rhs;
    }
    rep.max_excess = -std::numeric_limits<double>::infinity();
    for (auto& c : rep.cells) {
        const double excess = scale > 0.0 ? (c.lhs - c.rhs) / scale : c.lhs - c.rhs;
        rep.max_excess = std::max(rep.max_excess, excess);
        c.violated = excess > rel_tolerance;
        if (c.violated) ++rep.violations;
    }
    rep.sum_h_u = vol * su.value();
    rep.sum_h_v = vol * sv.value();
    rep.sum_all_u = vol * sa.value();
    rep.sum_h_lhs = vol * sl.value();
    rep.sum_h_rhs = vol * sr.value();
    rep.global_identity_applicable = h.offset_cells == 0;
    if (rep.global_identity_applicable) {
        const double denom = std::max(std::fabs(rep.sum_all_u), std::numeric_limits<double>::min());
        rep.global_identity_residual = std::fabs(rep.sum_all_u - rep.sum_h_u - rep.sum_h_v) / denom;
    } else {
        rep.global_identity_residual = std::numeric_limits<double>::quiet_NaN();
    }
    return rep;
}

}  // namespace nlab

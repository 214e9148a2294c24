#include "nlab/kernel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <list>
#include <mutex>
#include <tuple>

#include <boost/math/special_functions/beta.hpp>

#include "nlab/errors.hpp"
#include "nlab/parallel.hpp"
#include "quadrature.hpp"

namespace nlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// expm1(x) / x with the removable singularity filled in.
double expm1_ratio(double x) {
    if (std::fabs(x) < 1e-8) return 1.0 + 0.5 * x;
    return std::expm1(x) / x;
}

double taylor_pair(double gap, double w1, double w2, double alpha) {
    const double beta = 1.0 + alpha;
    const double c = gap + 0.5 * (w1 + w2);
    const double a = 0.5 * w1;
    const double b = 0.5 * w2;
    // Even moments of a sum of independent uniforms on [-a, a] and [-b, b].
    std::array<double, 41> pa{}, pb{};
    pa[0] = pb[0] = 1.0;
    for (int i = 1; i <= 40; ++i) {
        pa[i] = pa[i - 1] * a;
        pb[i] = pb[i - 1] * b;
    }
    double total = 0.0;
    double rising = 1.0;      // (beta)_{2j} / (2j)!
    double cpow = std::pow(c, -beta);
    const double c2 = 1.0 / (c * c);
    for (int j = 0; j <= 20; ++j) {
        const int n = 2 * j;
        if (j > 0) {
            rising *= (beta + n - 2) * (beta + n - 1) / (static_cast<double>(n - 1) * n);
            cpow *= c2;
        }
        double moment = 0.0;
        double binom = 1.0;  // C(n, 2i)
        for (int i = 0; i <= j; ++i) {
            moment += binom * pa[2 * i] / (2 * i + 1) * pb[n - 2 * i] / (n - 2 * i + 1);
            const double k = 2.0 * i;
            binom *= (n - k) * (n - k - 1) / ((k + 1) * (k + 2));
        }
        const double term = rising * cpow * moment;
        total += term;
        if (term < 1e-18 * total) break;
    }
    return w1 * w2 * total;
}

}  // namespace

double power_tail_difference(double r1, double r2, double alpha) {
    if (alpha == 0.0) throw GuardViolation("power kernel exponent must be nonzero");
    if (!(r1 >= 0.0) || !(r2 >= r1)) throw GuardViolation("tail difference needs 0 <= r1 <= r2");
    if (r1 == r2) return 0.0;
    if (r1 == 0.0) {
        if (alpha >= 1.0) return kInf;
        return std::pow(r2, 1.0 - alpha) / (alpha * (1.0 - alpha));
    }
    const double lr = std::log1p((r1 - r2) / r2);
    return std::pow(r2, 1.0 - alpha) * (-lr) * expm1_ratio((1.0 - alpha) * lr) / alpha;
}

double interval_pair_integral(double gap, double w1, double w2, double alpha) {
    if (alpha == 0.0) throw GuardViolation("power kernel exponent must be nonzero");
    if (!(gap >= 0.0) || !(w1 >= 0.0) || !(w2 >= 0.0)) throw GuardViolation("interval pair needs non-negative sizes");
    if (w1 == 0.0 || w2 == 0.0) return 0.0;
    if (gap == 0.0 && alpha >= 1.0) return kInf;
    if (std::isinf(w1) || std::isinf(w2)) {
        if (alpha <= 0.0) return kInf;
        if (std::isinf(w1) && std::isinf(w2)) {
            if (alpha <= 1.0 || gap == 0.0) return kInf;
            return std::pow(gap, 1.0 - alpha) / (alpha * (alpha - 1.0));
        }
        const double w = std::isinf(w1) ? w2 : w1;
        // int_0^w int_0^inf (gap + s + t)^(-1-alpha) = int_0^w (gap + s)^(-alpha) / alpha.
        return power_tail_difference(gap, gap + w, alpha);
    }
    const double c = gap + 0.5 * (w1 + w2);
    if (w1 + w2 < 0.2 * c) return taylor_pair(gap, w1, w2, alpha);
    return power_tail_difference(gap, gap + w1, alpha) - power_tail_difference(gap + w2, gap + w1 + w2, alpha);
}

double half_plane_constant(double alpha) {
    return std::sqrt(M_PI) * std::tgamma(0.5 * (1.0 + alpha)) / std::tgamma(1.0 + 0.5 * alpha);
}

namespace {

// int_0^{arcsin sigma} sin^alpha.
double sine_power_integral(double sigma, double alpha) {
    if (sigma <= 0.0) return 0.0;
    const double a = 0.5 * (alpha + 1.0);
    const double x = std::min(1.0, sigma * sigma);
    return 0.5 * boost::math::beta(a, 0.5) * boost::math::ibeta(a, 0.5, x);
}

}  // namespace

double quadrant_integral(double d1, double d2, double alpha) {
    if (!(alpha > 0.0)) throw GuardViolation("quadrant integral needs alpha > 0");
    const double rho = std::hypot(d1, d2);
    if (rho == 0.0) return kInf;
    double q = 0.0;
    if (d2 > 0.0) q += std::pow(d2, -alpha) * sine_power_integral(d2 / rho, alpha);
    if (d1 > 0.0) q += std::pow(d1, -alpha) * sine_power_integral(d1 / rho, alpha);
    return q / alpha;
}


double quadrant_cell_integral(int m1, int m2, double alpha) {
    if (m1 < 0 || m2 < 0) throw GuardViolation("quadrant cell indices must be non-negative");
    auto q = [alpha](double a, double b) { return quadrant_integral(a, b, alpha); };
    if (m1 == 0 && m2 == 0) {
        if (alpha >= 2.0) return kInf;
        return detail::homogeneous_unit_square(-alpha, 20, q);
    }
    const int far = std::max(m1, m2);
    const int n = far < 4 ? 12 : (far < 16 ? 8 : 4);
    return detail::gauss_square(m1, m2, 1.0, n, q);
}

double unit_square_pair(int k0, int k1, double alpha, int order) {
    if (!(alpha > 0.0)) throw GuardViolation("2D power kernel needs alpha > 0");
    if (order < 1 || order > 2) throw GuardViolation("quadrature order factor must be 1 or 2");
    k0 = std::abs(k0);
    k1 = std::abs(k1);
    if (k0 == 0 && k1 == 0) return kInf;
    const double e = -1.0 - 0.5 * alpha;
    const int far = std::max(k0, k1);
    const int n = order * (far <= 4 ? 16 : (far <= 16 ? 10 : 6));
    CompensatedSum total;
    for (int e0 = -1; e0 <= 0; ++e0) {
        const int lo0 = k0 + e0;
        const double a0 = e0 == -1 ? 1.0 - k0 : 1.0 + k0;
        const double b0 = e0 == -1 ? 1.0 : -1.0;
        for (int e1 = -1; e1 <= 0; ++e1) {
            const int lo1 = k1 + e1;
            const double a1 = e1 == -1 ? 1.0 - k1 : 1.0 + k1;
            const double b1 = e1 == -1 ? 1.0 : -1.0;
            const bool corner = (lo0 == 0 || lo0 == -1) && (lo1 == 0 || lo1 == -1);
            if (!corner) {
                total += detail::gauss_square(lo0, lo1, 1.0, n, [&](double x, double y) {
                    return (a0 + b0 * x) * (a1 + b1 * y) * std::pow(x * x + y * y, e);
                });
                continue;
            }
            // Reflect onto [0,1]^2 and split the bilinear weight into monomials.
            const double c0 = a0, d0 = lo0 == -1 ? -b0 : b0;
            const double c1 = a1, d1 = lo1 == -1 ? -b1 : b1;
            const std::array<std::array<double, 2>, 2> coef{{{c0 * c1, c0 * d1}, {d0 * c1, d0 * d1}}};
            for (int pa = 0; pa <= 1; ++pa) {
                for (int pb = 0; pb <= 1; ++pb) {
                    const double cf = coef[pa][pb];
                    if (cf == 0.0) continue;
                    if (pa + pb - alpha <= 0.0) return kInf;
                    const double v = detail::homogeneous_unit_square(pa + pb - 2.0 - alpha, 20 * order, [&](double x, double y) {
                        return (pa ? x : 1.0) * (pb ? y : 1.0) * std::pow(x * x + y * y, e);
                    });
                    total += cf * v;
                }
            }
        }
    }
    return total.value();
}

double PairKernel::block_exterior(const Block& b) const {
    const GridSpec& g = spec();
    CompensatedSum s;
    for (int i = b.i0; i < b.i0 + b.n0; ++i)
        for (int j = b.j0; j < b.j0 + b.n1; ++j) {
            const double v = cell_exterior(g.flat({i, g.dim() == 2 ? j : 0}));
            if (std::isinf(v)) return kInf;
            s += v;
        }
    return s.value();
}

namespace {

struct Segment {
    int lo, hi;
    double a, b;  // count(d) = a + b d on [lo, hi]
};

int overlap_count(int a0, int n0, int c0, int m0, int d) {
    return std::max(0, std::min(a0 + n0, c0 + m0 - d) - std::max(a0, c0 - d));
}

// Offsets d = j - i for i in [a0, a0 + n0), j in [c0, c0 + m0) with their
// multiplicities, as at most three linear pieces.
int offset_segments(int a0, int n0, int c0, int m0, std::array<Segment, 3>& out) {
    const int kmin = c0 - (a0 + n0 - 1);
    const int kmax = c0 + m0 - 1 - a0;
    const int m = std::min(n0, m0);
    int k = 0;
    out[k++] = {kmin, kmin + m - 1, 1.0 - kmin, 1.0};
    if (kmin + m <= kmax - m) out[k++] = {kmin + m, kmax - m, static_cast<double>(m), 0.0};
    const int flo = std::max(kmax - m + 1, kmin + m);
    if (flo <= kmax) out[k++] = {flo, kmax, kmax + 1.0, -1.0};
    return k;
}

class PowerKernel1D final : public PairKernel {
public:
    PowerKernel1D(const GridSpec& spec, double alpha) : PairKernel(spec), alpha_(alpha) {
        const int m = spec.cells_per_axis();
        scale_ = std::pow(spec.h(), 1.0 - alpha);
        table_.resize(static_cast<std::size_t>(m));
        table_[0] = kInf;
        for (int k = 1; k < m; ++k) table_[k] = scale_ * interval_pair_integral(k - 1.0, 1.0, 1.0, alpha);
        exterior_.resize(static_cast<std::size_t>(m));
        const double hs = std::pow(spec.h(), 1.0 - alpha);
        for (int i = 0; i < m; ++i) {
            const double left = power_tail_difference(i, i + 1.0, alpha);
            const double right = power_tail_difference(m - 1.0 - i, m - static_cast<double>(i), alpha);
            exterior_[i] = hs * (left + right);
        }
    }

    double cell_pair(int d0, int) const override {
        return table_[static_cast<std::size_t>(std::abs(d0))];
    }

    double block_pair(const Block& a, const Block& b) const override {
        if (a.n0 == 1 && b.n0 == 1) return cell_pair(b.i0 - a.i0, 0);
        int gap;
        if (b.i0 >= a.i0 + a.n0)
            gap = b.i0 - a.i0 - a.n0;
        else if (a.i0 >= b.i0 + b.n0)
            gap = a.i0 - b.i0 - b.n0;
        else
            throw GuardViolation("block_pair needs disjoint blocks");
        return scale_ * interval_pair_integral(gap, a.n0, b.n0, alpha_);
    }

    double cell_exterior(std::size_t flat) const override { return exterior_[flat]; }

    double block_exterior(const Block& b) const override {
        const int m = spec().cells_per_axis();
        const double left = power_tail_difference(b.i0, b.i0 + static_cast<double>(b.n0), alpha_);
        const double right = power_tail_difference(m - static_cast<double>(b.i0 + b.n0), m - static_cast<double>(b.i0), alpha_);
        return scale_ * (left + right);
    }

private:
    double alpha_;
    double scale_;
    std::vector<double> table_;
    std::vector<double> exterior_;
};

class TabulatedKernel final : public PairKernel {
public:
    TabulatedKernel(const GridSpec& spec, const std::function<double(int, int)>& pair, std::vector<double> exterior)
        : PairKernel(spec), m_(spec.cells_per_axis()), n_(2 * m_ - 1), exterior_(std::move(exterior)) {
        if (exterior_.size() != spec.size()) throw GuardViolation("exterior table size mismatch");
        const bool two = spec.dim() == 2;
        table_.assign(two ? static_cast<std::size_t>(n_) * n_ : static_cast<std::size_t>(n_), 0.0);
        if (two) {
            parallel_for(static_cast<std::size_t>(n_) * n_, [&](std::size_t idx) {
                const int d0 = static_cast<int>(idx / n_) - (m_ - 1);
                const int d1 = static_cast<int>(idx % n_) - (m_ - 1);
                table_[idx] = (d0 == 0 && d1 == 0) ? kInf : pair(d0, d1);
            });
        } else {
            for (int d = -(m_ - 1); d <= m_ - 1; ++d) table_[d + m_ - 1] = d == 0 ? kInf : pair(d, 0);
        }
        build_prefix();
    }

    double cell_pair(int d0, int d1) const override {
        if (spec().dim() == 1) return table_[static_cast<std::size_t>(d0 + m_ - 1)];
        return table_[index(d0, d1)];
    }

    double block_pair(const Block& a, const Block& b) const override {
        if (a.cells() == 1 && b.cells() == 1) return cell_pair(b.i0 - a.i0, b.j0 - a.j0);
        return spec().dim() == 1 ? block_pair_1d(a, b) : block_pair_2d(a, b);
    }

    double cell_exterior(std::size_t flat) const override { return exterior_[flat]; }

private:
    std::size_t index(int d0, int d1) const noexcept {
        return static_cast<std::size_t>(d0 + m_ - 1) * static_cast<std::size_t>(n_) +
               static_cast<std::size_t>(d1 + m_ - 1);
    }

    static bool near(int d) noexcept { return d >= -1 && d <= 1; }

    void build_prefix() {
        const auto w = static_cast<std::size_t>(n_ + 1);
        if (spec().dim() == 1) {
            p0_.assign(w, 0.0);
            p1_.assign(w, 0.0);
            for (int k = 0; k < n_; ++k) {
                const int d = k - (m_ - 1);
                const double t = near(d) ? 0.0 : table_[k];
                p0_[k + 1] = p0_[k] + t;
                p1_[k + 1] = p1_[k] + d * t;
            }
            return;
        }
        p0_.assign(w * w, 0.0);
        p1_.assign(w * w, 0.0);
        p2_.assign(w * w, 0.0);
        p12_.assign(w * w, 0.0);
        for (int x = 0; x < n_; ++x) {
            const int d0 = x - (m_ - 1);
            for (int y = 0; y < n_; ++y) {
                const int d1 = y - (m_ - 1);
                const double t = (near(d0) && near(d1)) ? 0.0 : table_[static_cast<std::size_t>(x) * n_ + y];
                const std::size_t o = (x + 1) * w + (y + 1);
                const std::size_t up = x * w + (y + 1), left = (x + 1) * w + y, diag = x * w + y;
                p0_[o] = t + p0_[up] + p0_[left] - p0_[diag];
                p1_[o] = d0 * t + p1_[up] + p1_[left] - p1_[diag];
                p2_[o] = d1 * t + p2_[up] + p2_[left] - p2_[diag];
                p12_[o] = static_cast<double>(d0) * d1 * t + p12_[up] + p12_[left] - p12_[diag];
            }
        }
    }

    double block_pair_1d(const Block& a, const Block& b) const {
        std::array<Segment, 3> seg{};
        const int ns = offset_segments(a.i0, a.n0, b.i0, b.n0, seg);
        double s = 0.0;
        for (int d = -1; d <= 1; ++d) {
            const int c = overlap_count(a.i0, a.n0, b.i0, b.n0, d);
            if (c == 0) continue;
            if (d == 0) throw GuardViolation("block_pair needs disjoint blocks");
            const double t = table_[d + m_ - 1];
            if (std::isinf(t)) return kInf;
            s += c * t;
        }
        for (int k = 0; k < ns; ++k) {
            const int lo = seg[k].lo + m_ - 1, hi = seg[k].hi + m_;
            s += seg[k].a * (p0_[hi] - p0_[lo]) + seg[k].b * (p1_[hi] - p1_[lo]);
        }
        return s;
    }

    double rect(const std::vector<double>& p, int lo0, int hi0, int lo1, int hi1) const {
        const auto w = static_cast<std::size_t>(n_ + 1);
        const std::size_t x0 = lo0 + m_ - 1, x1 = hi0 + m_, y0 = lo1 + m_ - 1, y1 = hi1 + m_;
        return p[x1 * w + y1] - p[x0 * w + y1] - p[x1 * w + y0] + p[x0 * w + y0];
    }

    double block_pair_2d(const Block& a, const Block& b) const {
        double s = 0.0;
        for (int d0 = -1; d0 <= 1; ++d0) {
            const int c0 = overlap_count(a.i0, a.n0, b.i0, b.n0, d0);
            if (c0 == 0) continue;
            for (int d1 = -1; d1 <= 1; ++d1) {
                const int c1 = overlap_count(a.j0, a.n1, b.j0, b.n1, d1);
                if (c1 == 0) continue;
                if (d0 == 0 && d1 == 0) throw GuardViolation("block_pair needs disjoint blocks");
                const double t = table_[index(d0, d1)];
                if (std::isinf(t)) return kInf;
                s += static_cast<double>(c0) * c1 * t;
            }
        }
        std::array<Segment, 3> s0{}, s1{};
        const int n0 = offset_segments(a.i0, a.n0, b.i0, b.n0, s0);
        const int n1 = offset_segments(a.j0, a.n1, b.j0, b.n1, s1);
        for (int i = 0; i < n0; ++i) {
            for (int j = 0; j < n1; ++j) {
                const Segment& u = s0[i];
                const Segment& v = s1[j];
                s += u.a * v.a * rect(p0_, u.lo, u.hi, v.lo, v.hi) + u.a * v.b * rect(p2_, u.lo, u.hi, v.lo, v.hi) +
                     u.b * v.a * rect(p1_, u.lo, u.hi, v.lo, v.hi) + u.b * v.b * rect(p12_, u.lo, u.hi, v.lo, v.hi);
            }
        }
        return s;
    }

    int m_;
    int n_;
    std::vector<double> table_;
    std::vector<double> exterior_;
    std::vector<double> p0_, p1_, p2_, p12_;
};

double exterior_2d(int m, int i, int j, double alpha, const std::vector<double>& qcell) {
    const double c = half_plane_constant(alpha);
    double hp = 0.0;
    for (int k : {i, m - 1 - i, j, m - 1 - j}) {
        const double t = power_tail_difference(k, k + 1.0, alpha);
        if (std::isinf(t)) return kInf;
        hp += t;
    }
    auto q = [&](int a, int b) { return qcell[static_cast<std::size_t>(std::min(a, b)) * m + std::max(a, b)]; };
    const double quad = q(i, j) + q(m - 1 - i, j) + q(i, m - 1 - j) + q(m - 1 - i, m - 1 - j);
    if (std::isinf(quad)) return kInf;
    return c * hp - quad;
}

KernelPtr build_power_kernel(const GridSpec& spec, double alpha) {
    if (spec.dim() == 1) return std::make_shared<PowerKernel1D>(spec, alpha);
    const int m = spec.cells_per_axis();
    const double scale = std::pow(spec.h(), 2.0 - alpha);
    std::vector<double> unit(static_cast<std::size_t>(m) * m, 0.0);
    parallel_for(unit.size(), [&](std::size_t idx) {
        const int a = static_cast<int>(idx / m), b = static_cast<int>(idx % m);
        if (a > b || (a == 0 && b == 0)) return;
        unit[idx] = unit_square_pair(a, b, alpha);
    });
    std::vector<double> qcell(static_cast<std::size_t>(m) * m, 0.0);
    parallel_for(qcell.size(), [&](std::size_t idx) {
        const int a = static_cast<int>(idx / m), b = static_cast<int>(idx % m);
        if (a > b) return;
        qcell[idx] = quadrant_cell_integral(a, b, alpha);
    });
    std::vector<double> ext(spec.size());
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) {
            // The four symmetric copies share one evaluation so the table is
            // exactly invariant under the square's reflections.
            const int a = std::min(i, m - 1 - i), b = std::min(j, m - 1 - j);
            ext[spec.flat({i, j})] = scale * exterior_2d(m, std::min(a, b), std::max(a, b), alpha, qcell);
        }
    auto pair = [&](int d0, int d1) {
        const int a = std::abs(d0), b = std::abs(d1);
        return scale * unit[static_cast<std::size_t>(std::min(a, b)) * m + std::max(a, b)];
    };
    return std::make_shared<TabulatedKernel>(spec, pair, std::move(ext));
}

}  // namespace

KernelPtr tabulated_kernel(const GridSpec& spec, const std::function<double(int, int)>& cell_pair,
                           std::vector<double> exterior) {
    return std::make_shared<TabulatedKernel>(spec, cell_pair, std::move(exterior));
}

KernelPtr power_kernel(const GridSpec& spec, double alpha) {
    if (!(alpha > 0.0) || !std::isfinite(alpha)) throw GuardViolation("power kernel needs finite alpha > 0");
    using Key = std::tuple<int, double, int, double>;
    static std::mutex mutex;
    static std::list<std::pair<Key, KernelPtr>> cache;
    const Key key{spec.dim(), spec.half_width(), spec.cells_per_axis(), alpha};
    {
        std::lock_guard lock(mutex);
        for (auto it = cache.begin(); it != cache.end(); ++it)
            if (it->first == key) {
                cache.splice(cache.begin(), cache, it);
                return cache.front().second;
            }
    }
    KernelPtr k = build_power_kernel(spec, alpha);
    std::lock_guard lock(mutex);
    cache.emplace_front(key, k);
    if (cache.size() > 12) cache.pop_back();
    return k;
}

}  // namespace nlab

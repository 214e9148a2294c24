#include "nlab/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "nlab/errors.hpp"

namespace nlab {

namespace {

using Real = long double;
constexpr Real kInf = std::numeric_limits<Real>::infinity();

struct Vertex {
    Real x;
    Real y;
};

using Polygon = std::vector<Vertex>;

// f(x, y) = a + b x + c y.
struct Affine {
    Real a, b, c;
    Real operator()(const Vertex& v) const noexcept { return a + b * v.x + c * v.y; }
};

// Keeps {f > 0}.
Polygon clip(const Polygon& poly, const Affine& f) {
    Polygon out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vertex& p = poly[i];
        const Vertex& q = poly[(i + 1) % n];
        const Real fp = f(p), fq = f(q);
        if (fp > 0) out.push_back(p);
        if ((fp > 0) != (fq > 0) && fp != fq) {
            const Real t = fp / (fp - fq);
            if (t > 0 && t < 1) out.push_back({p.x + t * (q.x - p.x), p.y + t * (q.y - p.y)});
        }
    }
    return out;
}

Real area(const Polygon& poly) {
    Real a = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return std::fabs(a) / 2;
}

// Length in x of the chord {x - y = z} of a convex polygon.
Real chord(const Polygon& poly, Real z) {
    Real lo = kInf, hi = -kInf;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const auto& p = poly[i];
        const auto& q = poly[(i + 1) % poly.size()];
        const Real zp = p.x - p.y, zq = q.x - q.y;
        if (zp == z) {
            lo = std::min(lo, p.x);
            hi = std::max(hi, p.x);
        }
        if ((zp - z) * (zq - z) < 0) {
            const Real x = p.x + (z - zp) / (zq - zp) * (q.x - p.x);
            lo = std::min(lo, x);
            hi = std::max(hi, x);
        }
    }
    return hi > lo ? hi - lo : 0;
}

// int_{ra}^{rb} (A + B r) r^{-1-p} dr with the linear chord profile, 0 < ra < rb.
Real radial_segment(Real ra, Real rb, Real la, Real lb, Real p) {
    const Real b = (lb - la) / (rb - ra);
    const Real a = la - b * ra;
    const Real log_ratio = std::log1p(-(rb - ra) / rb);  // ln(ra / rb)
    const Real m0 = std::pow(rb, -p) * std::expm1(-p * log_ratio) / p;
    const Real m1 = p == 1 ? -log_ratio : -std::pow(rb, 1 - p) * std::expm1((1 - p) * log_ratio) / (1 - p);
    return a * m0 + b * m1;
}

Real polygon_kernel_integral(const Polygon& poly, Real p) {
    if (poly.size() < 3) return 0;
    Real zmin = kInf, zmax = -kInf;
    std::vector<Real> zs;
    for (const auto& v : poly) {
        const Real z = v.x - v.y;
        zmin = std::min(zmin, z);
        zmax = std::max(zmax, z);
        zs.push_back(z);
    }
    if (!(area(poly) > 0) || zmax <= zmin) return 0;
    if (zmin <= 0 && zmax >= 0) return kInf;
    std::sort(zs.begin(), zs.end());
    zs.erase(std::unique(zs.begin(), zs.end()), zs.end());
    Real total = 0;
    for (std::size_t k = 0; k + 1 < zs.size(); ++k) {
        const Real za = zs[k], zb = zs[k + 1];
        const Real la = chord(poly, za), lb = chord(poly, zb);
        if (za > 0)
            total += radial_segment(za, zb, la, lb, p);
        else
            total += radial_segment(-zb, -za, lb, la, p);
    }
    return total;
}

Real phi(Real r, Real p) {
    if (std::isinf(r)) return 0;
    return p == 1 ? -std::log(r) : std::pow(r, 1 - p) / (p * (p - 1));
}

LinearPiece clip_piece(const LinearPiece& q, Real a, Real b) {
    const Real x0 = std::max(q.x0, a), x1 = std::min(q.x1, b);
    return {x0, x1, q.at(x0), q.at(x1)};
}

// x-intervals of the finite piece where sign * u(x) > delta.
std::vector<std::pair<Real, Real>> level_intervals(const LinearPiece& q, Real threshold, int sign) {
    std::vector<std::pair<Real, Real>> out;
    const Real f0 = sign * q.v0 - threshold, f1 = sign * q.v1 - threshold;
    if (f0 <= 0 && f1 <= 0) return out;
    if (f0 > 0 && f1 > 0) {
        out.emplace_back(q.x0, q.x1);
        return out;
    }
    const Real xc = q.x0 + f0 / (f0 - f1) * (q.x1 - q.x0);
    if (f0 > 0)
        out.emplace_back(q.x0, xc);
    else
        out.emplace_back(xc, q.x1);
    return out;
}

// int over x in P, y in Q with |u_P(x) - u_Q(y)| > delta of |x - y|^{-1-p}.
Real pair_integral(const LinearPiece& pp, const LinearPiece& qq, Real delta, Real p) {
    if (!(pp.x1 > pp.x0) || !(qq.x1 > qq.x0)) return 0;
    const bool p_inf = std::isinf(pp.x0) || std::isinf(pp.x1);
    const bool q_inf = std::isinf(qq.x0) || std::isinf(qq.x1);
    if (p_inf || q_inf) {
        if ((p_inf && !pp.constant()) || (q_inf && !qq.constant()))
            throw NumericalFailure("unbounded pieces must be constant");
        if (p_inf && q_inf) {
            if (std::fabs(pp.v0 - qq.v0) > delta) return kInf;
            return 0;
        }
        const LinearPiece& fin = p_inf ? qq : pp;
        const LinearPiece& inf = p_inf ? pp : qq;
        Real total = 0;
        for (int sign : {1, -1}) {
            const LinearPiece shifted{fin.x0, fin.x1, fin.v0 - inf.v0, fin.v1 - inf.v0};
            for (const auto& [a, b] : level_intervals(shifted, delta, sign))
                total += rectangle_kernel_integral(a, b, inf.x0, inf.x1, static_cast<double>(p));
        }
        return total;
    }
    const Polygon rect{{pp.x0, qq.x0}, {pp.x1, qq.x0}, {pp.x1, qq.x1}, {pp.x0, qq.x1}};
    const Real bp = pp.constant() ? 0 : pp.slope();
    const Real bq = qq.constant() ? 0 : qq.slope();
    Real total = 0;
    for (int sign : {1, -1}) {
        // sign * (u_P(x) - u_Q(y)) - delta
        const Affine f{sign * (pp.v0 - bp * pp.x0 - qq.v0 + bq * qq.x0) - delta, sign * bp, -sign * bq};
        if (bp == 0 && bq == 0) {
            if (f.a > 0) total += polygon_kernel_integral(rect, p);
            continue;
        }
        total += polygon_kernel_integral(clip(rect, f), p);
    }
    return total;
}

std::vector<LinearPiece> covering(const PiecewiseLinear& u) {
    const auto& ps = u.pieces();
    std::vector<LinearPiece> out;
    if (ps.empty()) {
        out.push_back({-kInf, kInf, 0, 0});
        return out;
    }
    const auto filled = u.with_zero_fill(ps.front().x0, ps.back().x1);
    out.push_back({-kInf, ps.front().x0, 0, 0});
    for (const auto& q : filled.pieces()) out.push_back(q);
    out.push_back({ps.back().x1, kInf, 0, 0});
    return out;
}

EnergyValue finish(Real total, double delta, double p) {
    if (std::isinf(total)) return EnergyValue::divergent();
    return EnergyValue::finite(static_cast<double>(std::pow(static_cast<Real>(delta), static_cast<Real>(p)) * total));
}

void check_params(double delta, double p) {
    if (!(delta > 0)) throw GuardViolation("delta must be positive");
    if (!(p >= 1)) throw GuardViolation("p must be at least 1");
}

}  // namespace

long double LinearPiece::at(long double x) const noexcept {
    if (v0 == v1 || x <= x0) return v0;
    if (x >= x1) return v1;
    return v0 + (v1 - v0) * ((x - x0) / (x1 - x0));
}

PiecewiseLinear::PiecewiseLinear(std::vector<LinearPiece> pieces) : pieces_(std::move(pieces)) {
    std::erase_if(pieces_, [](const LinearPiece& q) { return !(q.x1 > q.x0); });
    std::sort(pieces_.begin(), pieces_.end(), [](const auto& a, const auto& b) { return a.x0 < b.x0; });
    for (std::size_t i = 0; i < pieces_.size(); ++i) {
        if (!std::isfinite(pieces_[i].x0) || !std::isfinite(pieces_[i].x1))
            throw GuardViolation("pieces must be bounded");
        if (i > 0 && pieces_[i].x0 < pieces_[i - 1].x1) throw GuardViolation("pieces overlap");
    }
}

long double PiecewiseLinear::operator()(long double x) const noexcept {
    for (const auto& q : pieces_)
        if (x >= q.x0 && x < q.x1) return q.at(x);
    return 0;
}

PiecewiseLinear PiecewiseLinear::with_zero_fill(long double a, long double b) const {
    std::vector<LinearPiece> out;
    Real cursor = a;
    for (const auto& q : pieces_) {
        if (q.x0 > cursor) out.push_back({cursor, std::min(q.x0, static_cast<Real>(b)), 0, 0});
        out.push_back(q);
        cursor = std::max(cursor, q.x1);
    }
    if (b > cursor) out.push_back({cursor, b, 0, 0});
    return PiecewiseLinear(std::move(out));
}

PiecewiseLinear PiecewiseLinear::polarized(long double boundary, Side side) const {
    if (pieces_.empty()) return *this;
    std::vector<Real> cuts{boundary};
    for (const auto& q : pieces_)
        for (Real x : {q.x0, q.x1}) {
            cuts.push_back(x);
            cuts.push_back(2 * boundary - x);
        }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());

    auto piece_at = [&](Real x) -> LinearPiece {
        for (const auto& q : pieces_)
            if (x > q.x0 && x < q.x1) return q;
        return {x, x, 0, 0};
    };
    // Value of the piece around m, evaluated at x (constant pieces exactly).
    auto eval = [](const LinearPiece& q, Real x) { return q.x1 > q.x0 ? q.at(x) : q.v0; };

    const bool upper = side == Side::Upper;
    std::vector<LinearPiece> out;
    auto emit = [&](Real a, Real b, Real va, Real vb, Real ra, Real rb) {
        // On H keep the max; the mirror interval [2c - b, 2c - a] gets the min.
        out.push_back({a, b, std::max(va, ra), std::max(vb, rb)});
        out.push_back({2 * boundary - b, 2 * boundary - a, std::min(vb, rb), std::min(va, ra)});
    };
    for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
        const Real a = cuts[k], b = cuts[k + 1];
        if (upper ? a < boundary : b > boundary) continue;
        const Real m = (a + b) / 2;
        const auto q = piece_at(m);
        const auto r = piece_at(2 * boundary - m);
        const Real va = eval(q, a), vb = eval(q, b);
        const Real ra = eval(r, 2 * boundary - a), rb = eval(r, 2 * boundary - b);
        const Real d0 = va - ra, d1 = vb - rb;
        if ((d0 > 0 && d1 < 0) || (d0 < 0 && d1 > 0)) {
            const Real t = d0 / (d0 - d1);
            const Real xc = a + t * (b - a);
            const Real vc = eval(q, xc);
            emit(a, xc, va, vc, ra, vc);
            emit(xc, b, vc, vb, vc, rb);
        } else {
            emit(a, b, va, vb, ra, rb);
        }
    }
    std::erase_if(out, [](const LinearPiece& q) { return q.v0 == 0 && q.v1 == 0; });
    return PiecewiseLinear(std::move(out));
}

long double rectangle_kernel_integral(long double a0, long double a1, long double b0, long double b1, double p) {
    if (!(a1 > a0) || !(b1 > b0)) return 0;
    if (b1 <= a0) {
        std::swap(a0, b0);
        std::swap(a1, b1);
    }
    if (a1 >= b0) return kInf;
    const Real q = p;
    const Real g = b0 - a1;
    const Real w1 = a1 - a0, w2 = b1 - b0;
    if (std::isinf(w1) && std::isinf(w2)) return q == 1 ? kInf : phi(g, q);
    if (std::isinf(w1)) return q == 1 ? std::log1p(w2 / g) : phi(g, q) - phi(g + w2, q);
    if (std::isinf(w2)) return q == 1 ? std::log1p(w1 / g) : phi(g, q) - phi(g + w1, q);
    if (q == 1) return std::log1p(w1 * w2 / (g * (g + w1 + w2)));
    return phi(g, q) - phi(g + w1, q) - phi(g + w2, q) + phi(g + w1 + w2, q);
}

EnergyValue oracle_i_delta(const PiecewiseLinear& u, double delta, double p) {
    check_params(delta, p);
    const auto cover = covering(u);
    const Real d = delta, q = p;
    Real total = 0;
    for (std::size_t i = 0; i < cover.size(); ++i)
        for (std::size_t j = i; j < cover.size(); ++j) {
            const Real v = pair_integral(cover[i], cover[j], d, q);
            total += (i == j ? 1 : 2) * v;
            if (std::isinf(total)) return EnergyValue::divergent();
        }
    return finish(total, delta, p);
}

EnergyValue oracle_i_delta_restricted(const PiecewiseLinear& u, long double xa, long double xb, long double ya,
                                      long double yb, double delta, double p) {
    check_params(delta, p);
    const auto cover = covering(u);
    const Real d = delta, q = p;
    Real total = 0;
    for (const auto& pp : cover) {
        const auto px = clip_piece(pp, xa, xb);
        if (!(px.x1 > px.x0)) continue;
        for (const auto& qq : cover) {
            const auto qy = clip_piece(qq, ya, yb);
            if (!(qy.x1 > qy.x0)) continue;
            total += pair_integral(px, qy, d, q);
            if (std::isinf(total)) return EnergyValue::divergent();
        }
    }
    return finish(total, delta, p);
}

}  // namespace nlab

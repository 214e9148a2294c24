#include "nlab/nonlocal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nlab/errors.hpp"
#include "nlab/parallel.hpp"
#include "pairsum.hpp"

namespace nlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

EnergyValue from_sum(double v) {
    if (std::isnan(v)) throw NumericalFailure("energy accumulation produced NaN");
    return std::isinf(v) ? EnergyValue::divergent() : EnergyValue::finite(v);
}

double pow_p(double a, double p) {
    a = std::fabs(a);
    if (p == 2.0) return a * a;
    if (p == 1.0) return a;
    return std::pow(a, p);
}

void check_p(double p) {
    if (!(p >= 1.0) || !std::isfinite(p)) throw GuardViolation("exponent p must be finite and >= 1");
}

void check_delta(const KernelParams& k) {
    check_p(k.p);
    if (!(k.delta > 0.0) || !std::isfinite(k.delta)) throw GuardViolation("delta must be positive");
}

void check_s(const KernelParams& k) {
    check_p(k.p);
    if (!(k.s > 0.0 && k.s < 1.0)) throw GuardViolation("s must lie in (0, 1)");
}

struct Threshold {
    double delta, weight;
    double operator()(double a, double b) const noexcept { return std::fabs(a - b) > delta ? weight : 0.0; }
};

}  // namespace

EnergyValue EnergyValue::finite(double v) {
    if (!std::isfinite(v)) throw NumericalFailure("finite energy must be a finite number");
    EnergyValue e;
    e.value_ = v;
    return e;
}

double EnergyValue::value() const {
    if (!value_) throw NumericalFailure("energy is divergent");
    return *value_;
}

double EnergyValue::value_or_inf() const noexcept { return value_ ? *value_ : kInf; }

std::string EnergyValue::to_string() const {
    if (!value_) return "divergent";
    std::ostringstream os;
    os.precision(17);
    os << *value_;
    return os.str();
}

double knp_constant(int dim, double p) {
    check_p(p);
    if (dim == 1) return 2.0;
    if (dim == 2) return 2.0 * std::sqrt(M_PI) * std::tgamma(0.5 * (p + 1.0)) / std::tgamma(0.5 * p + 1.0);
    throw GuardViolation("K_{N,p} only for N in {1, 2}");
}

EnergyValue i_delta(const GridFunction& u, const KernelParams& params) {
    check_delta(params);
    const auto blocks = detail::value_blocks(u);
    const auto k = power_kernel(u.spec(), params.p);
    return from_sum(detail::symmetric_pair_energy(blocks, *k, Threshold{params.delta, std::pow(params.delta, params.p)}));
}

EnergyValue i_delta_restricted(const GridFunction& u, const Region& o, const Region& p, const KernelParams& params) {
    check_delta(params);
    if (o.cells.size() != u.size() || p.cells.size() != u.size()) throw GuardViolation("region size mismatch");
    std::vector<detail::BlockKey> keys(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) keys[i] = {u[i], 0.0, (o.contains(i) ? 1 : 0) | (p.contains(i) ? 2 : 0)};
    const auto blocks = detail::keyed_blocks(u.spec(), keys);
    const auto k = power_kernel(u.spec(), params.p);
    const Threshold phi{params.delta, std::pow(params.delta, params.p)};
    const double total = parallel_sum(blocks.size(), [&](std::size_t a) {
        const auto& ba = blocks[a];
        double s = 0.0;
        if (ba.key.tag & 1) {
            if (p.exterior) {
                const double f = phi(ba.key.a, 0.0);
                if (f != 0.0) s += f * k->block_exterior(ba.block);
            }
            for (std::size_t b = 0; b < blocks.size(); ++b) {
                if (b == a || !(blocks[b].key.tag & 2)) continue;
                const double f = phi(ba.key.a, blocks[b].key.a);
                if (f != 0.0) s += f * k->block_pair(ba.block, blocks[b].block);
            }
        }
        if ((ba.key.tag & 2) && o.exterior) {
            const double f = phi(0.0, ba.key.a);
            if (f != 0.0) s += f * k->block_exterior(ba.block);
        }
        return s;
    });
    return from_sum(total);
}

namespace {

EnergyValue gagliardo_local_linear(const GridFunction& u, const KernelParams& params) {
    const GridSpec& g = u.spec();
    if (g.dim() != 1) throw GuardViolation("local-linear near field is only available in 1D");
    const int m = g.cells_per_axis();
    const double h = g.h();
    const double p = params.p;
    const double alpha = p * params.s;
    const double q = p - alpha;
    const double self = 2.0 * std::pow(h, q + 1.0) / (q * (q + 1.0));
    const double touch = interval_pair_integral(0.0, h, h, -q);
    const auto k = power_kernel(g, alpha);
    const double total = parallel_sum(static_cast<std::size_t>(m), [&](std::size_t idx) {
        const int i = static_cast<int>(idx);
        const double ui = u.at(i);
        double s = pow_p((u.at(i + 1) - u.at(i - 1)) / (2.0 * h), p) * self;
        if (i + 1 < m) s += 2.0 * pow_p((u.at(i + 1) - ui) / h, p) * touch;
        for (int j = i + 2; j < m; ++j) {
            const double d = ui - u.at(j);
            if (d != 0.0) s += 2.0 * pow_p(d, p) * k->cell_pair(j - i);
        }
        if (ui != 0.0) s += 2.0 * pow_p(ui, p) * k->cell_exterior(idx);
        return s;
    });
    return from_sum(total);
}

}  // namespace

EnergyValue gagliardo_seminorm_p(const GridFunction& u, const KernelParams& params, NearField near) {
    check_s(params);
    const double alpha = params.p * params.s;
    if (near == NearField::Auto)
        near = (u.spec().dim() == 1 && alpha >= 1.0) ? NearField::LocalLinear : NearField::PiecewiseConstant;
    if (near == NearField::LocalLinear) return gagliardo_local_linear(u, params);
    const auto blocks = detail::value_blocks(u);
    const auto k = power_kernel(u.spec(), alpha);
    const double p = params.p;
    return from_sum(detail::symmetric_pair_energy(blocks, *k, [p](double a, double b) { return pow_p(a - b, p); }));
}

YoungFunction YoungFunction::power(double p) {
    check_p(p);
    return {Kind::Power, p};
}

YoungFunction YoungFunction::exponential() { return {Kind::Exponential, 0.0}; }

YoungFunction YoungFunction::hinge(double a) {
    if (!(a >= 0.0)) throw GuardViolation("hinge offset must be non-negative");
    return {Kind::Hinge, a};
}

double YoungFunction::operator()(double t) const noexcept {
    switch (kind_) {
        case Kind::Power: return pow_p(t, param_);
        case Kind::Exponential: return std::expm1(t);
        case Kind::Hinge: return std::max(t - param_, 0.0);
    }
    return 0.0;
}

std::string YoungFunction::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Power: os << "t^" << param_; break;
        case Kind::Exponential: os << "exp(t)-1"; break;
        case Kind::Hinge: os << "max(t-" << param_ << ",0)"; break;
    }
    return os.str();
}

RadialWeight RadialWeight::gaussian(double sigma) {
    if (!(sigma > 0.0)) throw GuardViolation("gaussian weight width must be positive");
    return {Kind::Gaussian, sigma, 0.0};
}

RadialWeight RadialWeight::algebraic(double beta) {
    if (!(beta > 0.0)) throw GuardViolation("algebraic weight exponent must be positive");
    return {Kind::Algebraic, beta, 0.0};
}

RadialWeight RadialWeight::truncated(double radius, double level) {
    if (!(radius > 0.0) || !(level >= 0.0)) throw GuardViolation("truncated weight needs radius > 0, level >= 0");
    return {Kind::Truncated, radius, level};
}

double RadialWeight::operator()(double r) const noexcept {
    switch (kind_) {
        case Kind::Gaussian: return std::exp(-0.5 * r * r / (a_ * a_));
        case Kind::Algebraic: return std::pow(1.0 + r, -a_);
        case Kind::Truncated: return r < a_ ? b_ : 0.0;
    }
    return 0.0;
}

double RadialWeight::l1_norm(int dim) const {
    if (dim != 1 && dim != 2) throw GuardViolation("weight norm only for dim 1 or 2");
    switch (kind_) {
        case Kind::Gaussian:
            return dim == 1 ? a_ * std::sqrt(2.0 * M_PI) : 2.0 * M_PI * a_ * a_;
        case Kind::Algebraic:
            if (a_ <= dim) throw GuardViolation("algebraic weight is not integrable for beta <= N");
            return dim == 1 ? 2.0 / (a_ - 1.0) : 2.0 * M_PI / ((a_ - 1.0) * (a_ - 2.0));
        case Kind::Truncated:
            return dim == 1 ? 2.0 * a_ * b_ : M_PI * a_ * a_ * b_;
    }
    return 0.0;
}

std::string RadialWeight::describe() const {
    std::ostringstream os;
    switch (kind_) {
        case Kind::Gaussian: os << "gaussian(sigma=" << a_ << ")"; break;
        case Kind::Algebraic: os << "(1+r)^-" << a_; break;
        case Kind::Truncated: os << b_ << "*1[r<" << a_ << "]"; break;
    }
    return os.str();
}

KernelPtr weight_kernel(const GridSpec& spec, const RadialWeight& w, int refinement) {
    if (refinement < 1 || refinement > 16) throw GuardViolation("quadrature refinement must be in [1, 16]");
    const int q = refinement;
    const int m = spec.cells_per_axis();
    const double h = spec.h();
    const double total = w.l1_norm(spec.dim()) * spec.cell_volume();
    // Midpoint rule on q^N points per cell: offsets between sub-points form a
    // finer lattice weighted by the discrete tent (q - |r|).
    const double norm = std::pow(static_cast<double>(q), -2.0 * spec.dim()) * spec.cell_volume() * spec.cell_volume();
    auto pair = [&, norm](int d0, int d1) {
        double s = 0.0;
        for (int r0 = -(q - 1); r0 <= q - 1; ++r0) {
            const double z0 = (d0 + static_cast<double>(r0) / q) * h;
            const double c0 = q - std::abs(r0);
            if (spec.dim() == 1) {
                s += c0 * w(std::fabs(z0));
                continue;
            }
            for (int r1 = -(q - 1); r1 <= q - 1; ++r1) {
                const double z1 = (d1 + static_cast<double>(r1) / q) * h;
                s += c0 * (q - std::abs(r1)) * w(std::hypot(z0, z1));
            }
        }
        return norm * s;
    };
    const int n = 2 * m - 1;
    std::vector<double> table(spec.dim() == 1 ? n : static_cast<std::size_t>(n) * n);
    if (spec.dim() == 1) {
        for (int d = 0; d < n; ++d) table[d] = pair(d - (m - 1), 0);
    } else {
        parallel_for(table.size(), [&](std::size_t idx) {
            table[idx] = pair(static_cast<int>(idx / n) - (m - 1), static_cast<int>(idx % n) - (m - 1));
        });
    }
    auto lookup = [&](int d0, int d1) {
        if (spec.dim() == 1) return table[static_cast<std::size_t>(d0 + m - 1)];
        return table[static_cast<std::size_t>(d0 + m - 1) * n + static_cast<std::size_t>(d1 + m - 1)];
    };
    std::vector<double> ext(spec.size());
    if (spec.dim() == 1) {
        for (int i = 0; i < m; ++i) {
            CompensatedSum s;
            for (int j = 0; j < m; ++j) s += lookup(j - i, 0);
            ext[i] = total - s.value();
        }
    } else {
        // Row sums of the offset table make each cell's in-grid total O(M).
        std::vector<double> prefix(static_cast<std::size_t>(n) * (n + 1), 0.0);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                prefix[static_cast<std::size_t>(a) * (n + 1) + b + 1] =
                    prefix[static_cast<std::size_t>(a) * (n + 1) + b] + table[static_cast<std::size_t>(a) * n + b];
        parallel_for(spec.size(), [&](std::size_t flat) {
            const CellIndex c = spec.unflat(flat);
            CompensatedSum s;
            for (int j0 = 0; j0 < m; ++j0) {
                const std::size_t row = static_cast<std::size_t>(j0 - c.i0 + m - 1) * (n + 1);
                const int lo = -c.i1 + m - 1;
                s += prefix[row + lo + m] - prefix[row + lo];
            }
            ext[flat] = total - s.value();
        });
    }
    return tabulated_kernel(spec, lookup, std::move(ext));
}

double young_weight_functional(const GridFunction& u, const YoungFunction& g, const RadialWeight& w, int refinement) {
    const auto k = weight_kernel(u.spec(), w, refinement);
    const auto blocks = detail::value_blocks(u);
    const double v = detail::symmetric_pair_energy(blocks, *k, [&g](double a, double b) { return g(std::fabs(a - b)); });
    if (!std::isfinite(v)) throw NumericalFailure("weighted functional is not finite");
    return v;
}

double young_two_point(const GridFunction& u, const Reflection& r, std::size_t x, std::size_t y,
                       const YoungFunction& g) {
    const auto sx = r.image(x), sy = r.image(y);
    if (!r.in_h(x) || !r.in_h(y) || !sx || !sy) throw GuardViolation("two-point term needs x, y in H with in-grid images");
    const double ux = u[x], uy = u[y], usx = u[*sx], usy = u[*sy];
    return (g(std::fabs(usx - uy)) - g(std::fabs(ux - uy))) + (g(std::fabs(ux - usy)) - g(std::fabs(usx - usy)));
}

double script_L(const GridFunction& v, std::size_t i, std::size_t j, const KernelParams& params) {
    check_delta(params);
    return std::fabs(v[i] - v[j]) > params.delta ? std::pow(params.delta, params.p) : 0.0;
}

namespace {

double script_d_values(double ux, double usx, double uy, double usy, const Threshold& l) {
    return l(usx, uy) + l(ux, usy) - l(ux, uy) - l(usx, usy);
}

}  // namespace

double script_D_delta(const GridFunction& u, const GridAlignedHalfSpace& h, std::size_t x, std::size_t y,
                      const KernelParams& params) {
    check_delta(params);
    const Reflection r(u.spec(), h);
    const auto sx = r.image(x), sy = r.image(y);
    if (!r.in_h(x) || !sx || !(u[x] <= u[*sx])) throw GuardViolation("x must lie in A");
    if (!r.in_h(y) || !sy || !(u[y] > u[*sy])) throw GuardViolation("y must lie in B");
    const Threshold l{params.delta, std::pow(params.delta, params.p)};
    return script_d_values(u[x], u[*sx], u[y], u[*sy], l);
}

EnergyValue defect(const GridFunction& u, const GridAlignedHalfSpace& h, const KernelParams& params) {
    check_delta(params);
    const GridSpec& g = u.spec();
    const Reflection r(g, h);
    std::vector<detail::BlockKey> keys(u.size());
    for (std::size_t x = 0; x < u.size(); ++x) {
        if (!r.in_h(x)) continue;
        const auto sx = r.image(x);
        if (!sx) continue;
        // Ties u(x) = u(sx) give D = 0, so only strict A-cells matter.
        if (u[x] < u[*sx]) keys[x] = {u[x], u[*sx], 1};
        else if (u[x] > u[*sx]) keys[x] = {u[x], u[*sx], 2};
    }
    const auto blocks = detail::keyed_blocks(g, keys);
    std::vector<std::size_t> a_idx, b_idx;
    for (std::size_t i = 0; i < blocks.size(); ++i) (blocks[i].key.tag == 1 ? a_idx : b_idx).push_back(i);
    const auto k = power_kernel(g, params.p);
    const Threshold l{params.delta, std::pow(params.delta, params.p)};
    auto mirror = [&](Block b) {
        const int two_b = 2 * r.boundary();
        if (h.axis == 0)
            b.i0 = two_b - b.i0 - b.n0;
        else
            b.j0 = two_b - b.j0 - b.n1;
        return b;
    };
    const double total = parallel_sum(a_idx.size(), [&](std::size_t ia) {
        const auto& ba = blocks[a_idx[ia]];
        const Block sa = mirror(ba.block);
        double s = 0.0;
        for (std::size_t ib : b_idx) {
            const auto& bb = blocks[ib];
            const double d = script_d_values(ba.key.a, ba.key.b, bb.key.a, bb.key.b, l);
            if (d == 0.0) continue;
            const double k1 = k->block_pair(ba.block, bb.block);
            const double k2 = k->block_pair(sa, bb.block);
            if (std::isinf(k1) || std::isinf(k2)) return kInf;
            s += d * (k1 - k2);
        }
        return s;
    });
    return from_sum(total);
}

std::vector<LimitRow> ng_limit_estimate(const GridFunction& u, double p, std::span<const double> deltas) {
    if (!(p > 1.0)) throw GuardViolation("Ng limit needs p > 1");
    const double target = knp_constant(u.spec().dim(), p) / p * discrete_gradient_energy(u, p);
    std::vector<LimitRow> rows;
    for (double d : deltas) {
        if (u.spec().h() > d / 8.0 * (1.0 + 1e-12))
            throw GuardViolation("grid too coarse for delta: need h <= delta / 8");
        const double v = i_delta(u, {p, d, 0.5}).value_or_inf();
        rows.push_back({d, u.spec().h(), v, target, target == 0.0 ? (v == 0.0 ? 1.0 : kInf) : v / target});
    }
    return rows;
}

std::vector<LimitRow> ng_limit_estimate(const Profile& f, double half_width, double p, std::span<const double> deltas,
                                        double refinement) {
    if (!(refinement >= 8.0)) throw GuardViolation("refinement must keep h <= delta / 8");
    std::vector<LimitRow> rows;
    for (double d : deltas) {
        const GridSpec spec = GridSpec::with_cell_width(f.dim, half_width, d / refinement);
        const GridFunction u = sample(spec, f);
        const double one[] = {d};
        rows.push_back(ng_limit_estimate(u, p, one).front());
    }
    return rows;
}

std::vector<LimitRow> bbm_approximant(const GridFunction& u, double p, std::span<const double> s_values) {
    check_p(p);
    const double target = knp_constant(u.spec().dim(), p) * discrete_gradient_energy(u, p);
    std::vector<LimitRow> rows;
    for (double s : s_values) {
        const double v = gagliardo_seminorm_p(u, {p, 1.0, s}).value_or_inf() * (1.0 - s);
        rows.push_back({s, u.spec().h(), v, target, target == 0.0 ? (v == 0.0 ? 1.0 : kInf) : v / target});
    }
    return rows;
}

SobolevReport sobolev_ratio(const GridFunction& u, const KernelParams& params, double lambda) {
    check_delta(params);
    const int n = u.spec().dim();
    if (n != 2) throw GuardViolation("Sobolev ratio needs dim = 2 (p < N)");
    if (!(params.p > 1.0 && params.p < n)) throw GuardViolation("Sobolev ratio needs 1 < p < N");
    if (!(lambda > 0.0)) throw GuardViolation("lambda must be positive");
    const double pstar = n * params.p / (n - params.p);
    const double level = lambda * params.delta;
    const double integral = lp_power_sum(u, pstar, [&](std::size_t i) { return std::fabs(u[i]) > level; });
    SobolevReport r{};
    r.lhs = std::pow(integral, 1.0 / pstar);
    const EnergyValue e = i_delta(u, params);
    r.energy_root = e.is_finite() ? std::pow(e.value(), 1.0 / params.p) : kInf;
    if (r.lhs == 0.0)
        r.ratio = 0.0;
    else
        r.ratio = r.energy_root == 0.0 ? kInf : r.lhs / r.energy_root;
    return r;
}

}  // namespace nlab

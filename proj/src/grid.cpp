#include "nlab/grid.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "nlab/errors.hpp"
#include "nlab/parallel.hpp"

namespace nlab {

GridSpec::GridSpec(int dim, double half_width, int cells_per_axis)
    : dim_(dim), half_width_(half_width), m_(cells_per_axis), h_(2.0 * half_width / cells_per_axis) {
    if (dim != 1 && dim != 2) throw GuardViolation("grid dimension must be 1 or 2");
    if (!(half_width > 0.0) || !std::isfinite(half_width))
        throw GuardViolation("half_width must be positive and finite");
    if (cells_per_axis < 2 || cells_per_axis % 2 != 0)
        throw GuardViolation("cells_per_axis must be even and at least 2");
    if (dim == 2 && cells_per_axis > 46340) throw GuardViolation("2D grid too large");
}

GridSpec GridSpec::with_cell_width(int dim, double half_width, double h) {
    if (!(h > 0.0)) throw GuardViolation("cell width must be positive");
    const double m = 2.0 * half_width / h;
    const double rounded = std::round(m);
    if (std::fabs(m - rounded) > 1e-6 * std::max(1.0, rounded))
        throw GuardViolation("cell width does not divide the domain");
    if (rounded > 1e9) throw GuardViolation("grid too fine");
    return GridSpec(dim, half_width, static_cast<int>(rounded));
}

std::size_t GridSpec::size() const noexcept {
    const auto m = static_cast<std::size_t>(m_);
    return dim_ == 1 ? m : m * m;
}

std::size_t GridSpec::flat(CellIndex c) const noexcept {
    return dim_ == 1 ? static_cast<std::size_t>(c.i0)
                     : static_cast<std::size_t>(c.i0) * static_cast<std::size_t>(m_) +
                           static_cast<std::size_t>(c.i1);
}

CellIndex GridSpec::unflat(std::size_t flat) const noexcept {
    if (dim_ == 1) return {static_cast<int>(flat), 0};
    const auto m = static_cast<std::size_t>(m_);
    return {static_cast<int>(flat / m), static_cast<int>(flat % m)};
}

Point GridSpec::center(std::size_t flat) const noexcept {
    const CellIndex c = unflat(flat);
    return {coordinate(c.i0), dim_ == 2 ? coordinate(c.i1) : 0.0};
}

long long GridSpec::radial_key(std::size_t flat) const noexcept {
    const CellIndex c = unflat(flat);
    const long long a = 2LL * c.i0 - m_ + 1;
    const long long b = dim_ == 2 ? 2LL * c.i1 - m_ + 1 : 0;
    return a * a + b * b;
}

GridFunction::GridFunction(GridSpec spec) : spec_(spec), values_(spec.size(), 0.0) {}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
    if (values_.size() != spec_.size())
        throw GuardViolation("value count " + std::to_string(values_.size()) + " does not match grid size " +
                             std::to_string(spec_.size()));
    for (double v : values_)
        if (!std::isfinite(v)) throw GuardViolation("grid values must be finite");
}

GridFunction GridFunction::sample(GridSpec spec, const std::function<double(Point)>& f) {
    std::vector<double> v(spec.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = f(spec.center(i));
    return GridFunction(spec, std::move(v));
}

double GridFunction::at(int i0, int i1) const noexcept {
    const int m = spec_.cells_per_axis();
    if (i0 < 0 || i0 >= m) return 0.0;
    if (spec_.dim() == 1) return values_[static_cast<std::size_t>(i0)];
    if (i1 < 0 || i1 >= m) return 0.0;
    return values_[spec_.flat({i0, i1})];
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

GridFunction operator-(const GridFunction& a, const GridFunction& b) {
    if (!(a.spec() == b.spec())) throw GuardViolation("grid mismatch");
    std::vector<double> v(a.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = a[i] - b[i];
    return GridFunction(a.spec(), std::move(v));
}

GridFunction abs(const GridFunction& u) {
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x = std::fabs(x);
    return GridFunction(u.spec(), std::move(v));
}

double lp_power_sum(const GridFunction& u, double p, const std::function<bool(std::size_t)>& keep) {
    CompensatedSum s;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (!keep(i)) continue;
        const double a = std::fabs(u[i]);
        s += p == 2.0 ? a * a : (p == 1.0 ? a : std::pow(a, p));
    }
    return s.value() * u.spec().cell_volume();
}

double lp_norm(const GridFunction& u, double p) {
    if (!(p >= 1.0)) throw GuardViolation("lp_norm needs p >= 1");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : u.values()) m = std::max(m, std::fabs(v));
        return m;
    }
    const double s = lp_power_sum(u, p, [](std::size_t) { return true; });
    return p == 1.0 ? s : (p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p));
}

DistributionFunction::DistributionFunction(const GridFunction& u) {
    std::vector<double> a;
    a.reserve(u.size());
    for (double v : u.values())
        if (v != 0.0) a.push_back(std::fabs(v));
    std::sort(a.begin(), a.end());
    const double vol = u.spec().cell_volume();
    for (std::size_t i = 0; i < a.size();) {
        std::size_t j = i;
        while (j < a.size() && a[j] == a[i]) ++j;
        levels_.push_back(a[i]);
        measures_.push_back(static_cast<double>(a.size() - i) * vol);
        i = j;
    }
}

double DistributionFunction::operator()(double t) const {
    if (t < 0.0) throw GuardViolation("distribution function needs t >= 0");
    const auto it = std::upper_bound(levels_.begin(), levels_.end(), t);
    if (it == levels_.end()) return 0.0;
    return measures_[static_cast<std::size_t>(it - levels_.begin())];
}

DistributionFunction distribution_function(const GridFunction& u) { return DistributionFunction(u); }

double lorentz_quasinorm(const GridFunction& u, double q, double theta) {
    if (!(q > 0.0) || std::isinf(q)) throw GuardViolation("Lorentz exponent q must be positive and finite");
    if (!(theta > 0.0)) throw GuardViolation("Lorentz exponent theta must be positive");
    const DistributionFunction mu(u);
    const auto t = mu.levels();
    const auto m = mu.measures();
    if (std::isinf(theta)) {
        double s = 0.0;
        for (std::size_t k = 0; k < t.size(); ++k) s = std::max(s, t[k] * std::pow(m[k], 1.0 / q));
        return s;
    }
    CompensatedSum s;
    double prev = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        const double tk = std::pow(t[k], theta);
        s += std::pow(m[k], theta / q) * (tk - prev) / theta;
        prev = tk;
    }
    return std::pow(s.value(), 1.0 / theta);
}

double unit_ball_volume(int dim) {
    switch (dim) {
        case 1: return 2.0;
        case 2: return std::numbers::pi;
        default: throw GuardViolation("unit ball volume only for dim 1 or 2");
    }
}

double pointwise_decay_bound(const GridFunction& u, double q, double theta) {
    const double omega = unit_ball_volume(u.spec().dim());
    const double norm = lorentz_quasinorm(u, q, theta);
    const double scale = std::pow(omega, -1.0 / q);
    if (std::isinf(theta)) return scale * norm;
    return scale * std::pow(theta, 1.0 / theta) * norm;
}

double discrete_gradient_energy(const GridFunction& u, double p) {
    if (!(p >= 1.0) || std::isinf(p)) throw GuardViolation("gradient energy needs finite p >= 1");
    const GridSpec& g = u.spec();
    const int m = g.cells_per_axis();
    const double h = g.h();
    auto power = [p](double a) { return p == 2.0 ? a * a : std::pow(std::fabs(a), p); };
    CompensatedSum s;
    if (g.dim() == 1) {
        for (int i = -1; i < m; ++i) s += power((u.at(i + 1) - u.at(i)) / h);
    } else {
        for (int i = -1; i < m; ++i) {
            for (int j = -1; j < m; ++j) {
                const double c = u.at(i, j);
                const double d0 = (u.at(i + 1, j) - c) / h;
                const double d1 = (u.at(i, j + 1) - c) / h;
                const double sq = d0 * d0 + d1 * d1;
                s += p == 2.0 ? sq : std::pow(sq, p / 2.0);
            }
        }
    }
    return s.value() * g.cell_volume();
}

std::vector<std::size_t> radial_order(const GridSpec& spec) {
    std::vector<long long> key(spec.size());
    for (std::size_t i = 0; i < key.size(); ++i) key[i] = spec.radial_key(i);
    std::vector<std::size_t> order(spec.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
    return order;
}

bool is_radially_decreasing(const GridFunction& u) {
    const auto order = radial_order(u.spec());
    for (std::size_t k = 1; k < order.size(); ++k)
        if (u[order[k]] > u[order[k - 1]]) return false;
    return true;
}

TailBound tail_norm_bound_check(const GridFunction& u, double p, double r, double radius) {
    if (!(p >= 1.0) || !(r > p) || std::isinf(r)) throw GuardViolation("tail bound needs 1 <= p < r < infinity");
    if (!(radius >= 0.0)) throw GuardViolation("tail radius must be non-negative");
    const GridSpec& g = u.spec();
    const double r2 = radius * radius;
    auto outside = [&](std::size_t i) {
        const Point c = g.center(i);
        return c[0] * c[0] + c[1] * c[1] >= r2;
    };
    double eps = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        if (outside(i)) eps = std::max(eps, std::fabs(u[i]));
    const double lr = lp_power_sum(u, r, outside);
    const double lp = lp_power_sum(u, p, outside);
    TailBound t{};
    t.epsilon = eps;
    t.lhs = std::pow(lr, 1.0 / r);
    t.rhs = eps == 0.0 ? 0.0 : std::pow(eps, (r - p) / r) * std::pow(lp, 1.0 / r);
    t.holds = t.lhs <= t.rhs * (1.0 + 1e-12);
    return t;
}

}  // namespace nlab

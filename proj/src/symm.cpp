#include "nlab/symm.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "nlab/errors.hpp"

namespace nlab {

Point HalfSpace::reflect(Point x) const noexcept {
    const double d = normal[0] * x[0] + normal[1] * x[1] - offset;
    return {x[0] - 2.0 * d * normal[0], x[1] - 2.0 * d * normal[1]};
}

bool HalfSpace::contains(Point x) const noexcept { return normal[0] * x[0] + normal[1] * x[1] <= offset; }

HalfSpace GridAlignedHalfSpace::geometric(const GridSpec& spec) const {
    HalfSpace h;
    const double sign = side == Side::Lower ? 1.0 : -1.0;
    h.normal = axis == 0 ? Point{sign, 0.0} : Point{0.0, sign};
    h.offset = offset_cells * spec.h();
    return h;
}

std::string GridAlignedHalfSpace::describe() const {
    const std::string x = "x" + std::to_string(axis);
    const std::string c = std::to_string(offset_cells) + "h";
    return side == Side::Lower ? x + "<=" + c : x + ">=-" + c;
}

Reflection::Reflection(const GridSpec& spec, const GridAlignedHalfSpace& half_space)
    : spec_(spec), hs_(half_space) {
    const int m = spec.cells_per_axis();
    if (half_space.axis < 0 || half_space.axis >= spec.dim()) throw GuardViolation("half-space axis out of range");
    if (half_space.offset_cells < 0 || half_space.offset_cells > m / 2)
        throw GuardViolation("half-space offset must lie in [0, L]");
    boundary_ = half_space.side == Side::Lower ? m / 2 + half_space.offset_cells : m / 2 - half_space.offset_cells;
}

bool Reflection::in_h(std::size_t flat) const noexcept {
    const CellIndex c = spec_.unflat(flat);
    const int i = hs_.axis == 0 ? c.i0 : c.i1;
    return hs_.side == Side::Lower ? i < boundary_ : i >= boundary_;
}

std::optional<std::size_t> Reflection::image(std::size_t flat) const noexcept {
    CellIndex c = spec_.unflat(flat);
    int& i = hs_.axis == 0 ? c.i0 : c.i1;
    const int j = 2 * boundary_ - 1 - i;
    if (j < 0 || j >= spec_.cells_per_axis()) return std::nullopt;
    i = j;
    return spec_.flat(c);
}

GridFunction polarize(const GridFunction& u, const GridAlignedHalfSpace& half_space) {
    const Reflection r(u.spec(), half_space);
    GridFunction out = u;
    for (std::size_t x = 0; x < u.size(); ++x) {
        if (!r.in_h(x)) continue;
        if (const auto y = r.image(x)) {
            out[x] = std::max(u[x], u[*y]);
            out[*y] = std::min(u[x], u[*y]);
        } else if (u[x] < 0.0) {
            throw GuardViolation("polarization needs u >= 0 on cells whose mirror image is outside the grid");
        }
    }
    return out;
}

GridFunction polarize_resampled(const GridFunction& u, const HalfSpace& half_space) {
    const GridSpec& g = u.spec();
    const double norm = std::hypot(half_space.normal[0], half_space.normal[1]);
    if (!(std::fabs(norm - 1.0) < 1e-12)) throw GuardViolation("half-space normal must be a unit vector");
    if (!(half_space.offset >= 0.0)) throw GuardViolation("half-space must contain the origin");
    auto lookup = [&](Point p) {
        const auto idx = [&](double x) { return static_cast<int>(std::floor((x + g.half_width()) / g.h())); };
        return g.dim() == 1 ? u.at(idx(p[0])) : u.at(idx(p[0]), idx(p[1]));
    };
    GridFunction out = u;
    for (std::size_t x = 0; x < u.size(); ++x) {
        const Point c = g.center(x);
        const double w = lookup(half_space.reflect(c));
        out[x] = half_space.contains(c) ? std::max(u[x], w) : std::min(u[x], w);
    }
    return out;
}

Region Region::all(const GridSpec& spec, bool with_exterior) {
    return Region{std::vector<char>(spec.size(), 1), with_exterior};
}

Region Region::none(const GridSpec& spec) { return Region{std::vector<char>(spec.size(), 0), false}; }

std::size_t Region::count() const noexcept {
    return static_cast<std::size_t>(std::count(cells.begin(), cells.end(), char{1}));
}

Region Partition::o1(const GridSpec& spec) const {
    Region r = Region::none(spec);
    for (const auto* set : {&a, &c, &f})
        for (std::size_t i : *set) r.cells[i] = 1;
    r.exterior = true;
    return r;
}

Region Partition::o2(const GridSpec& spec) const {
    Region r = Region::none(spec);
    for (const auto* set : {&b, &d})
        for (std::size_t i : *set) r.cells[i] = 1;
    return r;
}

Partition partition_abcd(const GridFunction& u, const GridAlignedHalfSpace& half_space) {
    const Reflection r(u.spec(), half_space);
    Partition p;
    for (std::size_t x = 0; x < u.size(); ++x) {
        if (!r.in_h(x)) continue;
        const auto y = r.image(x);
        if (!y) {
            if (u[x] != 0.0)
                throw GuardViolation("decomposition needs u = 0 on cells whose mirror image is outside the grid");
            p.f.push_back(x);
        } else if (u[x] <= u[*y]) {
            p.a.push_back(x);
            p.c.push_back(*y);
        } else {
            p.b.push_back(x);
            p.d.push_back(*y);
        }
    }
    return p;
}

SchwarzRearrangement schwarz_rearrangement(const GridFunction& u) {
    const bool negative = u.min() < 0.0;
    std::vector<double> v(u.values().begin(), u.values().end());
    for (double& x : v) x = std::fabs(x);
    std::sort(v.begin(), v.end(), std::greater<>());
    const auto order = radial_order(u.spec());
    std::vector<double> out(v.size());
    for (std::size_t k = 0; k < order.size(); ++k) out[order[k]] = v[k];
    return {GridFunction(u.spec(), std::move(out)), negative};
}

GridFunction schwarz_rearrange(const GridFunction& u) { return schwarz_rearrangement(u).function; }

HalfSpaceSchedule::HalfSpaceSchedule(const GridSpec& spec, std::uint64_t seed) {
    const int half = spec.cells_per_axis() / 2;
    for (int axis = 0; axis < spec.dim(); ++axis) {
        cycle_.push_back({axis, 0, Side::Lower});
        for (int m = 1; m < half; ++m) {
            cycle_.push_back({axis, m, Side::Lower});
            cycle_.push_back({axis, m, Side::Upper});
        }
    }
    // Fisher-Yates on the raw engine output keeps the order identical across
    // standard library implementations.
    std::mt19937_64 rng(seed);
    for (std::size_t i = cycle_.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(cycle_[i - 1], cycle_[j]);
    }
}

HalfSpaceSchedule::HalfSpaceSchedule(std::vector<GridAlignedHalfSpace> cycle) : cycle_(std::move(cycle)) {
    if (cycle_.empty()) throw GuardViolation("schedule needs at least one half-space");
}

PolarizationTrajectory iterate_polarization(const GridFunction& u0, const HalfSpaceSchedule& schedule,
                                            std::size_t steps, double p) {
    PolarizationTrajectory t{{}, {}, schwarz_rearrange(u0)};
    if (u0.min() < 0.0) throw GuardViolation("polarization iteration needs u >= 0");
    t.iterates.reserve(steps + 1);
    t.iterates.push_back(u0);
    t.errors.push_back(lp_norm(u0 - t.target, p));
    for (std::size_t n = 0; n < steps; ++n) {
        GridFunction next = t.iterates.back();
        for (std::size_t k = 0; k <= n; ++k) next = polarize(next, schedule[k]);
        t.errors.push_back(lp_norm(next - t.target, p));
        t.iterates.push_back(std::move(next));
    }
    return t;
}

ContractionCheck polarization_contraction_check(const GridFunction& u, const GridFunction& v,
                                                const GridAlignedHalfSpace& half_space, double p) {
    ContractionCheck c{};
    c.lhs = lp_norm(polarize(u, half_space) - polarize(v, half_space), p);
    c.rhs = lp_norm(u - v, p);
    c.holds = c.lhs <= c.rhs;
    return c;
}

}  // namespace nlab

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlab/grid.hpp"

namespace nlab {

// Closed half-space {x : normal . x <= offset} with unit normal and offset >= 0.
struct HalfSpace {
    Point normal{1.0, 0.0};
    double offset = 0.0;

    Point reflect(Point x) const noexcept;
    bool contains(Point x) const noexcept;
};

enum class Side { Lower, Upper };

// Half-space bounded by a grid line: Lower is {x_axis <= c}, Upper is
// {x_axis >= -c}, with c = offset_cells * h. The reflection maps cells to cells.
struct GridAlignedHalfSpace {
    int axis = 0;
    int offset_cells = 0;
    Side side = Side::Lower;

    HalfSpace geometric(const GridSpec& spec) const;
    std::string describe() const;
    bool operator==(const GridAlignedHalfSpace&) const = default;
};

class Reflection {
public:
    Reflection(const GridSpec& spec, const GridAlignedHalfSpace& half_space);

    const GridSpec& spec() const noexcept { return spec_; }
    const GridAlignedHalfSpace& half_space() const noexcept { return hs_; }
    bool in_h(std::size_t flat) const noexcept;
    // Image cell, empty when the reflected cell lies outside the grid.
    std::optional<std::size_t> image(std::size_t flat) const noexcept;
    // Cells of H whose image is outside the grid.
    bool fixed(std::size_t flat) const noexcept { return in_h(flat) && !image(flat); }
    // Grid line bounding H along the axis; cell i maps to 2 * boundary - 1 - i.
    int boundary() const noexcept { return boundary_; }

private:
    GridSpec spec_;
    GridAlignedHalfSpace hs_;
    int boundary_;  // index of the grid line bounding H along the axis
};

// u^H. Exact on the grid. Cells of H whose mirror lies outside the grid pair
// with the zero exterior, so u must be non-negative there.
GridFunction polarize(const GridFunction& u, const GridAlignedHalfSpace& half_space);

// Polarization for an arbitrary half-space by nearest-cell resampling of
// reflected centers. Not equimeasurable in general.
GridFunction polarize_resampled(const GridFunction& u, const HalfSpace& half_space);

// Cell set plus an optional flag for the exterior of the grid (where u = 0).
struct Region {
    std::vector<char> cells;
    bool exterior = false;

    static Region all(const GridSpec& spec, bool with_exterior = true);
    static Region none(const GridSpec& spec);
    bool contains(std::size_t flat) const noexcept { return cells[flat] != 0; }
    std::size_t count() const noexcept;
};

// A = {x in H : u(x) <= u(sx)}, B = {x in H : u(x) > u(sx)}, C = sA, D = sB,
// over cells with in-grid images; F holds the cells of H whose images are
// exterior. Requires u = 0 on F.
struct Partition {
    std::vector<std::size_t> a, b, c, d, f;

    Region o1(const GridSpec& spec) const;  // A u C u F u exterior
    Region o2(const GridSpec& spec) const;  // B u D
};

Partition partition_abcd(const GridFunction& u, const GridAlignedHalfSpace& half_space);

struct SchwarzRearrangement {
    GridFunction function;
    bool used_absolute_value;
};

// Sorted permutation of |u| along radial_order: equimeasurable and radially
// non-increasing, with ties broken by flat index.
SchwarzRearrangement schwarz_rearrangement(const GridFunction& u);
GridFunction schwarz_rearrange(const GridFunction& u);

// Seeded cyclic enumeration of grid-aligned half-spaces containing the
// origin: every axis, every offset c in [0, L), both sides for c > 0 and the
// Lower side at c = 0. Each entry recurs with period period().
class HalfSpaceSchedule {
public:
    HalfSpaceSchedule(const GridSpec& spec, std::uint64_t seed);
    explicit HalfSpaceSchedule(std::vector<GridAlignedHalfSpace> cycle);

    const GridAlignedHalfSpace& operator[](std::size_t n) const noexcept { return cycle_[n % cycle_.size()]; }
    std::size_t period() const noexcept { return cycle_.size(); }
    std::span<const GridAlignedHalfSpace> cycle() const noexcept { return cycle_; }

private:
    std::vector<GridAlignedHalfSpace> cycle_;
};

struct PolarizationTrajectory {
    std::vector<GridFunction> iterates;  // u_0 .. u_n
    std::vector<double> errors;          // ||u_k - u*||_p
    GridFunction target;                 // u*
};

// u_{n+1} = u_n polarized by H_1, ..., H_{n+1} in order.
PolarizationTrajectory iterate_polarization(const GridFunction& u0, const HalfSpaceSchedule& schedule,
                                            std::size_t steps, double p = 2.0);

struct ContractionCheck {
    double lhs;  // ||u^H - v^H||_p
    double rhs;  // ||u - v||_p
    bool holds;
};

ContractionCheck polarization_contraction_check(const GridFunction& u, const GridFunction& v,
                                                const GridAlignedHalfSpace& half_space, double p);

}  // namespace nlab

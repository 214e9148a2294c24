#pragma once

#include <array>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace nlab {

using Point = std::array<double, 2>;

struct CellIndex {
    int i0 = 0;
    int i1 = 0;
    bool operator==(const CellIndex&) const = default;
};

// Uniform grid of piecewise-constant cells on [-L, L]^dim, dim in {1, 2}.
// Cell (i0, i1) covers [-L + i0 h, -L + (i0 + 1) h] x [...]; flat index is
// i0 * M + i1 (row-major, axis 0 is the row).
class GridSpec {
public:
    GridSpec(int dim, double half_width, int cells_per_axis);

    // Builds the grid with cells_per_axis = 2L / h; rejects h that does not
    // divide the domain into an even number of cells.
    static GridSpec with_cell_width(int dim, double half_width, double h);

    int dim() const noexcept { return dim_; }
    double half_width() const noexcept { return half_width_; }
    int cells_per_axis() const noexcept { return m_; }
    double h() const noexcept { return h_; }
    double cell_volume() const noexcept { return dim_ == 1 ? h_ : h_ * h_; }
    std::size_t size() const noexcept;

    double coordinate(int index) const noexcept { return -half_width_ + (index + 0.5) * h_; }
    double lower_edge(int index) const noexcept { return -half_width_ + index * h_; }
    std::size_t flat(CellIndex c) const noexcept;
    CellIndex unflat(std::size_t flat) const noexcept;
    Point center(std::size_t flat) const noexcept;

    // Squared distance of the cell center from the origin in units of (h/2)^2.
    long long radial_key(std::size_t flat) const noexcept;

    bool operator==(const GridSpec&) const = default;

private:
    int dim_;
    double half_width_;
    int m_;
    double h_;
};

class GridFunction {
public:
    explicit GridFunction(GridSpec spec);
    GridFunction(GridSpec spec, std::vector<double> values);

    static GridFunction sample(GridSpec spec, const std::function<double(Point)>& f);

    const GridSpec& spec() const noexcept { return spec_; }
    std::span<const double> values() const noexcept { return values_; }
    std::span<double> mutable_values() noexcept { return values_; }
    std::size_t size() const noexcept { return values_.size(); }
    double operator[](std::size_t flat) const noexcept { return values_[flat]; }
    double& operator[](std::size_t flat) noexcept { return values_[flat]; }

    // Value at a cell, zero for indices outside the grid.
    double at(int i0, int i1 = 0) const noexcept;

    double min() const;
    double max() const;

    bool operator==(const GridFunction&) const = default;

private:
    GridSpec spec_;
    std::vector<double> values_;
};

GridFunction operator-(const GridFunction& a, const GridFunction& b);
GridFunction abs(const GridFunction& u);

// (h^N sum |u|^p)^(1/p), or max |u| for p = infinity.
double lp_norm(const GridFunction& u, double p);

// Integral of |u|^p over the cells selected by the predicate on flat index.
double lp_power_sum(const GridFunction& u, double p, const std::function<bool(std::size_t)>& keep);

// mu(t) = |{|u| > t}|, a step function of t.
class DistributionFunction {
public:
    explicit DistributionFunction(const GridFunction& u);

    double operator()(double t) const;

    // Distinct positive levels t_1 < ... < t_K of |u| and the measure of
    // {|u| >= t_k}; mu equals measures[k] on [t_{k-1}, t_k).
    std::span<const double> levels() const noexcept { return levels_; }
    std::span<const double> measures() const noexcept { return measures_; }

private:
    std::vector<double> levels_;
    std::vector<double> measures_;
};

DistributionFunction distribution_function(const GridFunction& u);

// ||u||_{L^{q,theta}} in the form used by the decay lemma:
// (int_0^inf t^(theta-1) mu(t)^(theta/q) dt)^(1/theta), or
// sup_t t mu(t)^(1/q) for theta = infinity. Exact for step functions.
double lorentz_quasinorm(const GridFunction& u, double q, double theta);

// Constant K with u*(x) <= K |x|^(-N/q) for the radially decreasing
// rearrangement u*.
double pointwise_decay_bound(const GridFunction& u, double q, double theta);

// Volume of the unit ball in R^dim.
double unit_ball_volume(int dim);

// h^N sum |grad_h u|^p with forward differences and zero extension.
double discrete_gradient_energy(const GridFunction& u, double p);

// Cells sorted by (distance of the center from the origin, flat index).
std::vector<std::size_t> radial_order(const GridSpec& spec);

// True when u is non-increasing along radial_order.
bool is_radially_decreasing(const GridFunction& u);

struct TailBound {
    double lhs;      // ||u||_{L^r(outside B_R)}
    double rhs;      // eps^((r-p)/r) ||u||_{L^p(outside B_R)}^(p/r)
    double epsilon;  // largest |u| on cells centered outside B_R
    bool holds;
};

TailBound tail_norm_bound_check(const GridFunction& u, double p, double r, double radius);

}  // namespace nlab

#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <vector>

#include "nlab/grid.hpp"

namespace nlab {

// Rectangle of cells [i0, i0 + n0) x [j0, j0 + n1); n1 = 1 in 1D.
struct Block {
    int i0 = 0;
    int n0 = 1;
    int j0 = 0;
    int n1 = 1;

    std::size_t cells() const noexcept { return static_cast<std::size_t>(n0) * static_cast<std::size_t>(n1); }
    bool operator==(const Block&) const = default;
};

// Translation-invariant kernel k(x - y) integrated over cell pairs, plus the
// interaction of cells with the zero exterior of the grid. Values are +inf
// where the integral diverges.
class PairKernel {
public:
    explicit PairKernel(GridSpec spec) : spec_(spec) {}
    virtual ~PairKernel() = default;
    PairKernel(const PairKernel&) = delete;
    PairKernel& operator=(const PairKernel&) = delete;

    const GridSpec& spec() const noexcept { return spec_; }

    // int_{cell x} int_{cell x + d h} k; d != 0.
    virtual double cell_pair(int d0, int d1 = 0) const = 0;

    // int_a int_b k for disjoint blocks.
    virtual double block_pair(const Block& a, const Block& b) const = 0;

    // int_{cell} int_{R^N minus grid} k.
    virtual double cell_exterior(std::size_t flat) const = 0;
    virtual double block_exterior(const Block& b) const;

private:
    GridSpec spec_;
};

using KernelPtr = std::shared_ptr<const PairKernel>;

// k(z) = |z|^(-N - alpha), alpha > 0. Cached per (grid, alpha).
KernelPtr power_kernel(const GridSpec& spec, double alpha);

// Kernel given by its offset table and per-cell exterior values.
KernelPtr tabulated_kernel(const GridSpec& spec, const std::function<double(int, int)>& cell_pair,
                           std::vector<double> exterior);

// int_0^w1 int_0^w2 (gap + s + t)^(-1 - alpha) ds dt; alpha != 0 may be
// negative. +inf when gap = 0 and alpha >= 1.
double interval_pair_integral(double gap, double w1, double w2, double alpha);

// G(r1) - G(r2) for 0 <= r1 <= r2, where G'' = r^(-1-alpha) and
// G' = -r^(-alpha) / alpha. Equals int_{r1}^{r2} r^(-alpha) / alpha dr.
double power_tail_difference(double r1, double r2, double alpha);

// Offset table of the 2D power kernel on unit cells: int int over two unit
// squares at integer offset k of |x - y|^(-2 - alpha). order scales the Gauss
// rules (1 = default); +inf when divergent.
double unit_square_pair(int k0, int k1, double alpha, int order = 1);

// int_R (1 + t^2)^(-1 - alpha/2) dt.
double half_plane_constant(double alpha);

// int over {t > d1, s > d2} of (t^2 + s^2)^(-1 - alpha/2).
double quadrant_integral(double d1, double d2, double alpha);

// int over the unit cell [m1, m1+1] x [m2, m2+1] of quadrant_integral.
double quadrant_cell_integral(int m1, int m2, double alpha);

}  // namespace nlab

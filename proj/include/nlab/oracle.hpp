#pragma once

#include <vector>

#include "nlab/nonlocal.hpp"
#include "nlab/symm.hpp"

namespace nlab {

// Linear from v0 at x0 to v1 at x1, x0 < x1.
struct LinearPiece {
    long double x0;
    long double x1;
    long double v0;
    long double v1;

    long double slope() const noexcept { return (v1 - v0) / (x1 - x0); }
    long double at(long double x) const noexcept;
    bool constant() const noexcept { return v0 == v1; }
    bool operator==(const LinearPiece&) const = default;
};

// 1D piecewise-linear function with compact support; zero outside the
// pieces. Pieces are sorted and do not overlap; gaps are zero.
class PiecewiseLinear {
public:
    PiecewiseLinear() = default;
    explicit PiecewiseLinear(std::vector<LinearPiece> pieces);

    const std::vector<LinearPiece>& pieces() const noexcept { return pieces_; }
    // Value on the open piece containing x (0 if none); at breakpoints the
    // piece on the right wins.
    long double operator()(long double x) const noexcept;

    // u^H for H = (-inf, b] (Lower) or [b, inf) (Upper), exact on pieces:
    // crossings of u and u o sigma split pieces.
    PiecewiseLinear polarized(long double boundary, Side side) const;

    // Same function with zero gaps filled by explicit zero pieces over [a, b].
    PiecewiseLinear with_zero_fill(long double a, long double b) const;

private:
    std::vector<LinearPiece> pieces_;
};

// int_{[a0,a1]} int_{[b0,b1]} |x - y|^{-1-p} for disjoint intervals, which
// may be unbounded; +inf when they touch.
long double rectangle_kernel_integral(long double a0, long double a1, long double b0, long double b1, double p);

// I_delta of the represented function over R x R.
EnergyValue oracle_i_delta(const PiecewiseLinear& u, double delta, double p);

// delta^p times the integral over x in [xa, xb], y in [ya, yb] with
// |u(x) - u(y)| > delta.
EnergyValue oracle_i_delta_restricted(const PiecewiseLinear& u, long double xa, long double xb, long double ya,
                                      long double yb, double delta, double p);

}  // namespace nlab

#pragma once

#include <cstddef>
#include <vector>

#include "nlab/grid.hpp"
#include "nlab/symm.hpp"

namespace nlab {

// D^s u at cell centers, dim components per cell (cell-major).
struct FractionalGradientField {
    GridSpec spec;
    double s;
    double convention_constant;
    std::vector<double> vectors;

    Point at(std::size_t flat) const noexcept;
    double norm(std::size_t flat) const noexcept;
};

// c_{N,s} = 2^s Gamma((N + s + 1)/2) / (pi^{N/2} Gamma((1 - s)/2)); in 1D the
// symbol of D^s is i sign(xi) (2 pi |xi|)^s, so D^1 = d/dx.
double riesz_constant(int dim, double s);

// c_{N,s} int (u(x) - u(y)) (x - y) / |x - y|^{N + s + 1} dy with a linear
// reconstruction u_j + g_j . (y - y_j) inside each cell (central-difference
// gradients) and the closed-form tail over the zero exterior.
FractionalGradientField fractional_gradient(const GridFunction& u, double s);

// Fourier-multiplier evaluation on a zero-padded periodic extension with
// padding * M points.
FractionalGradientField spectral_oracle_1d(const GridFunction& u, double s, int padding = 8);

// |int (u(x) - u(y)) (x - y) / |x - y|^{N + s + 1} dy|^p per cell (no c_{N,s}).
GridFunction j_functional(const GridFunction& u, double s, double p);

struct VWDecomposition {
    GridFunction v;  // u o sigma
    GridFunction w;  // u^H o sigma
};

// Requires u = 0 on cells of H whose mirror is outside the grid.
VWDecomposition vw_decomposition(const GridFunction& u, const GridAlignedHalfSpace& h);

struct KeycondCell {
    std::size_t cell;
    double lhs;  // J(u^H)(x) + J(w)(x)
    double rhs;  // J(u)(x) + J(v)(x)
    bool violated;
};

struct KeycondReport {
    std::vector<KeycondCell> cells;
    double tolerance;
    std::size_t violations;
    double max_excess;     // max of (lhs - rhs) / scale
    double sum_h_u;        // h^N sum_{x in H} J(u)
    double sum_h_v;        // h^N sum_{x in H} J(v)
    double sum_all_u;      // h^N sum over all cells of J(u)
    double sum_h_lhs;
    double sum_h_rhs;
    bool global_identity_applicable;  // grid symmetric under sigma (c = 0)
    double global_identity_residual;  // relative
};

// Evaluates both sides of the pointwise two-point inequality on every cell of
// H; violations beyond rel_tolerance times the largest rhs are counted.
KeycondReport keycond_probe(const GridFunction& u, const GridAlignedHalfSpace& h, double s, double p,
                            double rel_tolerance = 1e-8);

}  // namespace nlab

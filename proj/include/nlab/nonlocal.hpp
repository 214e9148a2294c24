#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "nlab/grid.hpp"
#include "nlab/kernel.hpp"
#include "nlab/profiles.hpp"
#include "nlab/symm.hpp"

namespace nlab {

struct KernelParams {
    double p = 2.0;
    double delta = 0.1;
    double s = 0.5;
};

// Finite number or Divergent (+infinity). Energies are non-negative; the
// defect is signed.
class EnergyValue {
public:
    static EnergyValue finite(double v);
    static EnergyValue divergent() noexcept { return EnergyValue(); }

    bool is_finite() const noexcept { return value_.has_value(); }
    bool is_divergent() const noexcept { return !value_; }
    double value() const;  // throws NumericalFailure when divergent
    double value_or_inf() const noexcept;
    std::string to_string() const;

    bool operator==(const EnergyValue&) const = default;

private:
    EnergyValue() = default;
    std::optional<double> value_;
};

// int_{S^{N-1}} |e . sigma|^p.
double knp_constant(int dim, double p);

// Energies below integrate over R^N x R^N: pairs of grid cells plus each cell
// against the zero exterior of the grid.

// delta^p |{(x, y) : |u(x) - u(y)| > delta}| weighted by |x - y|^(-N-p).
EnergyValue i_delta(const GridFunction& u, const KernelParams& params);

// Same integral over x in O, y in P.
EnergyValue i_delta_restricted(const GridFunction& u, const Region& o, const Region& p, const KernelParams& params);

enum class NearField {
    Auto,               // LocalLinear in 1D when p s >= 1, PiecewiseConstant otherwise
    PiecewiseConstant,  // exact for the step function
    LocalLinear,        // 1D: linear reconstruction on the cell itself and its neighbours
};

// int int |u(x) - u(y)|^p / |x - y|^(N + p s).
EnergyValue gagliardo_seminorm_p(const GridFunction& u, const KernelParams& params,
                                 NearField near = NearField::Auto);

// Convex non-decreasing G with G(0) = 0.
class YoungFunction {
public:
    enum class Kind { Power, Exponential, Hinge };

    static YoungFunction power(double p);
    static YoungFunction exponential();  // exp(t) - 1
    static YoungFunction hinge(double a);  // max(t - a, 0)

    double operator()(double t) const noexcept;
    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return param_; }
    std::string describe() const;

private:
    YoungFunction(Kind k, double param) : kind_(k), param_(param) {}
    Kind kind_;
    double param_;
};

// Bounded non-negative non-increasing radial weight.
class RadialWeight {
public:
    enum class Kind { Gaussian, Algebraic, Truncated };

    static RadialWeight gaussian(double sigma);          // exp(-r^2 / (2 sigma^2))
    static RadialWeight algebraic(double beta);          // (1 + r)^(-beta)
    static RadialWeight truncated(double radius, double level = 1.0);  // level on r < radius

    double operator()(double r) const noexcept;
    // int_{R^dim} w(|z|) dz; throws when infinite.
    double l1_norm(int dim) const;
    Kind kind() const noexcept { return kind_; }
    std::string describe() const;

private:
    RadialWeight(Kind k, double a, double b) : kind_(k), a_(a), b_(b) {}
    Kind kind_;
    double a_;
    double b_;
};

// Cell-pair integrals of w(|x - y|) by midpoint quadrature with refinement^N
// points per cell; the exterior part uses the exact integral of w.
KernelPtr weight_kernel(const GridSpec& spec, const RadialWeight& w, int refinement = 2);

// int int G(|u(x) - u(y)|) w(|x - y|).
double young_weight_functional(const GridFunction& u, const YoungFunction& g, const RadialWeight& w,
                               int refinement = 2);

// D^H(u, x, y) = G(|u(sx) - u(y)|) + G(|u(x) - u(sy)|) - G(|u(x) - u(y)|) - G(|u(sx) - u(sy)|)
// for cells x, y of H with in-grid images.
double young_two_point(const GridFunction& u, const Reflection& r, std::size_t x, std::size_t y,
                       const YoungFunction& g);

// delta^p if |v_i - v_j| > delta, else 0.
double script_L(const GridFunction& v, std::size_t i, std::size_t j, const KernelParams& params);

// L(u, sx, y) + L(u, x, sy) - L(u, x, y) - L(u, sx, sy) for x in A, y in B.
double script_D_delta(const GridFunction& u, const GridAlignedHalfSpace& h, std::size_t x, std::size_t y,
                      const KernelParams& params);

// sum over x in A, y in B of D_delta(x, y) (J(x, y) - J(sx, y)).
EnergyValue defect(const GridFunction& u, const GridAlignedHalfSpace& h, const KernelParams& params);

struct LimitRow {
    double param;   // delta or s
    double h;
    double value;   // I_delta or (1 - s) * seminorm; inf when divergent
    double target;
    double ratio;
};

// I_delta along the sequence against (1/p) K_{N,p} times the discrete
// gradient energy; rejects delta < 8 h.
std::vector<LimitRow> ng_limit_estimate(const GridFunction& u, double p, std::span<const double> deltas);

// Resamples the profile on [-L, L]^N with h = delta / refinement per delta.
std::vector<LimitRow> ng_limit_estimate(const Profile& f, double half_width, double p,
                                        std::span<const double> deltas, double refinement = 8.0);

// (1 - s) seminorm against K_{N,p} times the discrete gradient energy.
std::vector<LimitRow> bbm_approximant(const GridFunction& u, double p, std::span<const double> s_values);

struct SobolevReport {
    double lhs;          // (int_{|u| > lambda delta} |u|^{p*})^{1/p*}
    double energy_root;  // I_delta(u)^{1/p}, inf when divergent
    double ratio;
};

SobolevReport sobolev_ratio(const GridFunction& u, const KernelParams& params, double lambda);

}  // namespace nlab

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "nlab/grid.hpp"
#include "nlab/nonlocal.hpp"
#include "nlab/oracle.hpp"
#include "nlab/profiles.hpp"
#include "nlab/report.hpp"
#include "nlab/symm.hpp"

namespace nlab {

// Counterexample parameters. The grid has h = delta / refinement on
// [-L, L]^dim; eps_delta() is epsilon * delta rounded to a multiple of
// 4 ulp(delta) so every plateau jump of size delta is exact in double.
struct CounterexampleSpec {
    double delta = 1e-2;
    double epsilon = 1e-2;
    double p = 2.0;
    int dim = 1;
    int refinement = 8;
    double half_width = 3.0;
    bool shifted = false;  // adds 2 eps delta on |x| < 3

    void validate() const;
    double eps_delta() const;
    double h() const { return delta / refinement; }
    GridSpec grid() const;
    KernelParams kernel() const { return {p, delta, 0.5}; }
};

// H = [0, inf) (x R in 2D).
GridAlignedHalfSpace counterexample_half_space();

// The 1D profile: delta on (-2, -1], ramp on [-1, -1 + delta] sampled at cell
// midpoints, -2 eps delta on [-1 + delta, 0), -eps delta on (0, 1),
// delta - eps delta on (1, 2), 0 outside.
GridFunction build_mm1(const CounterexampleSpec& spec);

// Closed-form u^H on the intervals where it is piecewise constant; other
// cells are marked undefined.
struct PartialGridFunction {
    GridFunction values;
    std::vector<char> defined;
};

PartialGridFunction build_mm2_reference(const CounterexampleSpec& spec);

// U(x1, x2) = u(x1) - delta / 2 on |x|_inf <= 2, 0 elsewhere.
GridFunction build_nd_counterexample(const CounterexampleSpec& spec);

// Exact piecewise-linear form of build_mm1 (the ramp is exact, not sampled).
PiecewiseLinear mm1_pieces(const CounterexampleSpec& spec);

enum class Which { U, UH };

double analytic_oracle_i_delta_mm(const CounterexampleSpec& spec, Which which);

// The three competing terms of the lower bound for I(u^H) - I(u).
struct AsymptoticTerms {
    double gain;       // delta^p int_0^{1-delta} int_1^2 |x-y|^{-1-p}
    double ramp_loss;  // x in the ramp, y in (-2, 0), level set of u
    double far_loss;   // delta^p int_{-1}^0 int_1^2 |x-y|^{-1-p}
};

AsymptoticTerms asymptotic_terms(const CounterexampleSpec& spec);

// Per delta: oracle and grid energies of u and u^H, the defect, and the
// asymptotic terms.
StudyReport counterexample_scan(double p, double epsilon, std::span<const double> deltas, int refinement = 8,
                                bool shifted = false, bool with_grid = true);

// Grid of (delta, epsilon) points reporting the sign of the oracle difference;
// with epsilon_equals_delta each delta also gets a row with epsilon = delta.
StudyReport positivity_region_scan(double p, std::span<const double> deltas, std::span<const double> epsilons,
                                   bool epsilon_equals_delta = false);

// 1D: |defect| per delta with h = delta / refinement.
StudyReport vanishing_defect_study(const Profile& f, double half_width, const GridAlignedHalfSpace& h, double p,
                                   std::span<const double> deltas, double refinement = 8.0);

// Ng limit with the closed-form gradient energy of the profile.
StudyReport ng_limit_study(const Profile& f, double half_width, double p, std::span<const double> deltas,
                           double refinement = 8.0);

// (1 - s) seminorm paired with cell widths h_k.
StudyReport bbm_study(const Profile& f, double half_width, double p, std::span<const double> s_values,
                      std::span<const double> cell_widths);

struct DecayParams {
    double p = 1.5;
    double lambda = 1.0;
    double theta = 2.0;  // Lorentz index of the pointwise bound; inf allowed
    std::vector<double> deltas;
};

// 2D, 1 < p < 2, u >= 0.
StudyReport decay_study(const GridFunction& u, const DecayParams& params);

StudyReport polarization_convergence_study(const GridFunction& u0, const HalfSpaceSchedule& schedule,
                                           std::size_t steps, double p = 2.0);

// Max Sobolev ratio over random 2D bumps at h and h / 2.
StudyReport sobolev_study(std::size_t bumps, double p, double delta, double lambda, int cells_per_axis,
                          std::uint64_t seed);

// Random asymmetric nonnegative bumps probed with keycond_probe. Candidate
// violations are rerun on a grid refined by 2.
StudyReport keycond_study(std::size_t trials, int dim, int cells_per_axis, double s, double p, std::uint64_t seed,
                          double rel_tolerance = 1e-8);

// 1D spectral vs direct L2 gap on the inner half of the domain.
double riesz_inner_gap(const GridFunction& u, double s, int padding = 8);
StudyReport riesz_oracle_study(const Profile& f, double half_width, int cells_per_axis,
                               std::span<const double> s_values);

}  // namespace nlab

#pragma once

#include <cmath>
#include <vector>

#include "nlab/parallel.hpp"

namespace nlab::detail {

// Gauss-Legendre rule mapped to [0, 1].
struct Rule {
    std::vector<double> x;
    std::vector<double> w;
};

// n in {2, 4, 6, 8, 10, 12, 16, 20, 24, 32, 40}.
const Rule& gauss_rule(int n);

// Tensor Gauss rule on [x0, x0 + side] x [y0, y0 + side].
template <class F>
double gauss_square(double x0, double y0, double side, int n, F&& f) {
    const auto& r = gauss_rule(n);
    CompensatedSum s;
    for (std::size_t i = 0; i < r.x.size(); ++i) {
        const double x = x0 + side * r.x[i];
        double row = 0.0;
        for (std::size_t j = 0; j < r.x.size(); ++j) row += r.w[j] * f(x, y0 + side * r.x[j]);
        s += r.w[i] * row;
    }
    return s.value() * side * side;
}

// Integral over [0,1]^2 of a function homogeneous of degree d > -2, from the
// ring [0,1]^2 minus [0,1/2]^2 and the scaling relation.
template <class F>
double homogeneous_unit_square(double degree, int n, F&& f) {
    const double ring = gauss_square(0.5, 0.0, 0.5, n, f) + gauss_square(0.0, 0.5, 0.5, n, f) +
                        gauss_square(0.5, 0.5, 0.5, n, f);
    return ring / (1.0 - std::pow(2.0, -(2.0 + degree)));
}

}  // namespace nlab::detail

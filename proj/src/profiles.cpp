#include "nlab/profiles.hpp"

#include <cmath>

#include "nlab/errors.hpp"

namespace nlab {

namespace {

double distance(int dim, Point x, Point c) {
    const double a = x[0] - c[0];
    const double b = dim == 2 ? x[1] - c[1] : 0.0;
    return std::sqrt(a * a + b * b);
}

void check_dim(int dim) {
    if (dim != 1 && dim != 2) throw GuardViolation("profile dimension must be 1 or 2");
}

}  // namespace

Profile gaussian(int dim, Point center, double sigma, double amplitude) {
    check_dim(dim);
    if (!(sigma > 0.0)) throw GuardViolation("gaussian width must be positive");
    Profile f;
    f.name = "gaussian";
    f.dim = dim;
    f.value = [=](Point x) {
        const double r = distance(dim, x, center) / sigma;
        return amplitude * std::exp(-0.5 * r * r);
    };
    if (dim == 1) {
        // int |u'|^2 for the 1D gaussian.
        f.gradient_energy = [=](double p) {
            if (p != 2.0) return std::nan("");
            return amplitude * amplitude * std::sqrt(M_PI) / (2.0 * sigma);
        };
    }
    return f;
}

Profile hat(int dim, Point center, double radius, double height) {
    check_dim(dim);
    if (!(radius > 0.0)) throw GuardViolation("hat radius must be positive");
    Profile f;
    f.name = "hat";
    f.dim = dim;
    f.value = [=](Point x) {
        const double r = distance(dim, x, center);
        return r < radius ? height * (1.0 - r / radius) : 0.0;
    };
    f.gradient_energy = [=](double p) {
        const double vol = dim == 1 ? 2.0 * radius : M_PI * radius * radius;
        return std::pow(std::fabs(height) / radius, p) * vol;
    };
    return f;
}

Profile indicator_ball(int dim, Point center, double radius, double height) {
    check_dim(dim);
    Profile f;
    f.name = "indicator";
    f.dim = dim;
    f.value = [=](Point x) { return distance(dim, x, center) < radius ? height : 0.0; };
    return f;
}

Profile power_decay(int dim, Point center, double beta, double amplitude) {
    check_dim(dim);
    if (!(beta > 0.0)) throw GuardViolation("power decay exponent must be positive");
    Profile f;
    f.name = "power_decay";
    f.dim = dim;
    f.value = [=](Point x) {
        const double r = distance(dim, x, center);
        return amplitude * std::pow(1.0 + r * r, -0.5 * beta);
    };
    return f;
}

Profile smooth_bump(int dim, Point center, double radius, double height) {
    check_dim(dim);
    if (!(radius > 0.0)) throw GuardViolation("bump radius must be positive");
    Profile f;
    f.name = "smooth_bump";
    f.dim = dim;
    f.value = [=](Point x) {
        const double r = distance(dim, x, center) / radius;
        if (r >= 1.0) return 0.0;
        return height * std::exp(1.0 - 1.0 / (1.0 - r * r));
    };
    return f;
}

Profile sum(const Profile& a, const Profile& b) {
    if (a.dim != b.dim) throw GuardViolation("profile dimension mismatch");
    Profile f;
    f.name = a.name + "+" + b.name;
    f.dim = a.dim;
    f.value = [va = a.value, vb = b.value](Point x) { return va(x) + vb(x); };
    return f;
}

GridFunction sample(const GridSpec& spec, const Profile& f) {
    if (spec.dim() != f.dim) throw GuardViolation("profile and grid dimension differ");
    return GridFunction::sample(spec, f.value);
}

}  // namespace nlab

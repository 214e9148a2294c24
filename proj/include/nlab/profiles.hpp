#pragma once

#include <functional>
#include <optional>
#include <string>

#include "nlab/grid.hpp"

namespace nlab {

// Closed-form function on R^dim used to build grid functions.
struct Profile {
    std::string name;
    int dim = 1;
    std::function<double(Point)> value;
    // Exact int |grad u|^p when available.
    std::function<double(double)> gradient_energy;
};

Profile gaussian(int dim, Point center, double sigma, double amplitude = 1.0);

// height * (1 - |x - c| / radius)_+
Profile hat(int dim, Point center, double radius, double height = 1.0);

Profile indicator_ball(int dim, Point center, double radius, double height = 1.0);

// amplitude * (1 + |x - c|^2)^(-beta / 2)
Profile power_decay(int dim, Point center, double beta, double amplitude = 1.0);

// height * exp(1 - 1 / (1 - |x - c|^2 / radius^2)) inside the ball, 0 outside.
Profile smooth_bump(int dim, Point center, double radius, double height = 1.0);

Profile sum(const Profile& a, const Profile& b);

GridFunction sample(const GridSpec& spec, const Profile& f);

}  // namespace nlab

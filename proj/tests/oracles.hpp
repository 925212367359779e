#pragma once

// Reference values used by the tests. The numbers for V = 20 cos(4 pi x) were
// produced by an independent dense eigensolver and quadrature script and are
// frozen here.

#include <cmath>
#include <numbers>

namespace oracle {

constexpr double pi = std::numbers::pi;

// V = 20 cos(4 pi x), W = cos(2 pi x), M = 64, first crossing (bands 1, 2).
constexpr double mu_star     = 8.206520359540933;
constexpr double c_sharp     = -5.944205910587824;
constexpr double theta_sharp = 0.37429456685676643;
constexpr double beta1       = 1.0538177218793656;
constexpr double beta2       = -0.48955280808388024;

// Same potential, second crossing (bands 3, 4).
constexpr double mu_star_2     = 89.81342102111279;
constexpr double c_sharp_2     = 18.4815;
constexpr double theta_sharp_2 = 0.12211;
constexpr double beta1_2       = 1.01872;
constexpr double beta2_2       = -0.0035704;

/// Zero-energy homoclinic orbit for theta > 0 in closed form:
/// tan(phi) = -sqrt((theta - mu)/(theta + mu)) tanh(kappa y / c),
/// r^2 = 2 (theta cos 2phi - mu) / (b (cos^4 + sin^4) + 2 a cos^2 sin^2).
struct Orbit
{
    double u, v;
};

inline Orbit nld_orbit(double c, double theta, double mu, double a, double b, double y)
{
    double kappa = std::sqrt(theta * theta - mu * mu);
    double s     = std::tanh(kappa * y / c);
    double t     = -std::sqrt((theta - mu) / (theta + mu)) * s;
    double phi   = std::atan(t);
    double cs = std::cos(phi), sn = std::sin(phi);
    double q  = b * (std::pow(cs, 4) + std::pow(sn, 4)) + 2 * a * cs * cs * sn * sn;
    // theta cos(2 phi) - mu without cancellation in the tails
    double sech = 1 / std::cosh(kappa * y / c);
    double lift = (theta - mu) * sech * sech / (1 + t * t);
    double r    = std::sqrt(2 * lift / q);
    return {r * cs, r * sn};
}

} // namespace oracle

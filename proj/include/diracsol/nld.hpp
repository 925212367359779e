#pragma once

#include <array>
#include <complex>
#include <vector>

#include "diracsol/dirac_point.hpp"

namespace diracsol {

/// Coefficients of the stationary nonlinear Dirac system
///   c u' = (theta + mu) v + a u^2 v + b v^3,
///   c v' = (theta - mu) u - b u^3 - a v^2 u.
struct NLDParams
{
    double c_sharp{1};
    double theta_sharp{1};
    double mu_sharp{0};
    double beta1{1};
    double beta2{0};

    double a() const
    {
        return 0.75 * (beta1 - beta2);
    }

    double b() const
    {
        return 0.25 * (3 * beta1 + beta2);
    }

    /// sqrt(theta^2 - mu^2) / |c|
    double decay_rate() const;

    /// |c| / sqrt(theta^2 - mu^2)
    double decay_length() const
    {
        return 1 / decay_rate();
    }

    /// Throws ValidationError unless c, theta nonzero, |mu| < |theta| and beta1 >= |beta2| with beta1 > 0.
    void validate() const;

    static NLDParams from_dirac(DiracPointData const& d, double mu_sharp);
};

double hamiltonian(NLDParams const& p, double u, double v);

/// (u', v').
std::array<double, 2> vector_field(NLDParams const& p, double u, double v);

/// Zero-energy starting point on the u axis (theta > 0) or the v axis (theta < 0).
std::array<double, 2> initial_condition(NLDParams const& p);

std::vector<std::array<double, 2>> equilibria(NLDParams const& p);

struct HomoclinicOptions
{
    /// Half-width of the slow grid; 0 selects 30 decay lengths.
    double y_max{0};
    /// Integrator tolerance (absolute and relative).
    double tol{1e-12};
    int samples_per_decay_length{100};
    /// Use the second branch (u, v) -> (-u, -v).
    bool flip_branch{false};
};

/// Homoclinic orbit of the nonlinear Dirac system sampled on a uniform grid symmetric about 0.
struct SpinorProfile
{
    struct Sample
    {
        double u, v, du, dv;
    };

    NLDParams params;
    std::vector<double> y;
    std::vector<double> u, v;
    /// Derivatives taken from the vector field at each sample.
    std::vector<double> du, dv;
    std::vector<double> hamiltonian_trace;

    double decay_rate_fit{0};
    double h_drift_max{0};
    /// Deviation from the mirror symmetry measured on an independent backward integration.
    double parity_defect{0};
    bool angle_monotone{false};

    std::size_t size() const
    {
        return y.size();
    }

    double y_max() const
    {
        return y.back();
    }

    double dy() const
    {
        return y[1] - y[0];
    }

    std::complex<double> psi_minus(std::size_t i) const
    {
        return {0.5 * u[i], 0.5 * v[i]};
    }

    std::complex<double> psi_plus(std::size_t i) const
    {
        return std::conj(psi_minus(i));
    }

    /// Cubic Hermite interpolation of (u, v); derivatives from the vector field.
    Sample at(double yq) const;

    /// Copy restricted and resampled to n points on [-half_width, half_width].
    SpinorProfile resampled(double half_width, int n) const;
};

SpinorProfile integrate_homoclinic(NLDParams const& params, HomoclinicOptions const& opts = {});

/// (eta_minus, eta_plus) per slow grid point.
using SpinorSamples = std::vector<std::array<std::complex<double>, 2>>;

/// Linearization of the nonlinear Dirac system about the profile. Derivatives
/// use 8th-order central differences with zero values outside the grid.
SpinorSamples d0_apply(NLDParams const& params, SpinorProfile const& profile, SpinorSamples const& eta);

/// (Psi_minus', Psi_plus') from the stored derivatives.
SpinorSamples profile_derivative(SpinorProfile const& profile);

struct KernelReport
{
    double sigma_min_restricted{0};
    double sigma_min_unrestricted{0};
    double operator_norm{0};
    int points{0};
    double half_width{0};
};

/// Smallest singular values of the discretized linearization, on all spinors
/// with Psi_plus = conj(Psi_minus) and on the mirror-symmetric subspace.
/// half_width 0 selects 12 decay lengths; Dirichlet conditions at the ends.
KernelReport kernel_check_on_Y(NLDParams const& params, SpinorProfile const& profile, int points = 401,
                               double half_width = 0);

} // namespace diracsol

#pragma once

#include <array>
#include <complex>
#include <optional>
#include <vector>

#include "diracsol/cell_function.hpp"
#include "diracsol/dirac_point.hpp"
#include "diracsol/nld.hpp"

namespace diracsol {

constexpr int forcing_terms = 10;

using ForcingFactors = std::array<std::complex<double>, forcing_terms>;

/// G(x, y) = sum_j f_j(x) g_j(y): the first-order forcing of the two-scale expansion,
///   (2 d_x d_y - W + mu) U0 + U0^3.
struct SeparableForcing
{
    std::array<CellFunction, forcing_terms> x_profiles;
    std::vector<double> y_grid;
    /// g_j at each y_grid point.
    std::vector<ForcingFactors> y_factors;

    /// Coefficients of G(., y_grid[i]).
    Eigen::VectorXcd at(std::size_t i) const;
};

/// Cell profiles f_j; they depend only on the Bloch pair, W and mu.
std::array<CellFunction, forcing_terms> forcing_x_profiles(DiracPointData const& dirac, PeriodicPotential const& W,
                                                         double mu_sharp);

/// Envelope factors g_j from (u, v) and their slow derivatives.
ForcingFactors forcing_y_factors(double u, double v, double du, double dv);

/// Uses the profile's stored samples and stored derivatives.
SeparableForcing build_G1(DiracPointData const& dirac, PeriodicPotential const& W, SpinorProfile const& profile);

struct SolvabilityReport
{
    double max_projection{0};
    double max_forcing_norm{0};
    /// max_projection / max_forcing_norm
    double relative{0};
    double worst_y{0};
};

/// Largest |<G(., y), g_i>| over the y grid and i = 1, 2.
SolvabilityReport solvability_check(SeparableForcing const& forcing, DiracPointData const& dirac);

/// Cell solutions h_j of (-d_x^2 + V - mu*) h_j = f_j projected off the kernel,
/// so U1(x, y) = sum_j h_j(x) g_j(y).
struct CorrectorSolution
{
    std::array<CellFunction, forcing_terms> x_profiles;
    double max_residual{0};
    double max_kernel_overlap{0};
    /// Eigenvalue at k = pi closest to mu* outside the crossing pair.
    double nearest_other_eigenvalue{0};
};

/// Throws NumericalError when another band at k = pi lies within 1e-6 of mu*.
CorrectorSolution solve_U1(SeparableForcing const& forcing, DiracPointData const& dirac, PeriodicPotential const& V);

/// Re((u + iv)(delta x) g1(x)).
std::vector<double> build_U0(DiracPointData const& dirac, SpinorProfile const& profile, double delta,
                             std::vector<double> const& x_grid);

struct TwoScaleField
{
    double delta{0};
    double mu_delta{0};
    double h{0};
    /// Samples x_i = (i - n) h for i = 0..2n.
    long n{0};
    std::vector<double> samples;
    std::vector<double> u0;
    /// Empty when the corrector was not requested.
    std::vector<double> u1;

    double x(std::size_t i) const
    {
        return (static_cast<long>(i) - n) * h;
    }

    double half_width() const
    {
        return n * h;
    }
};

/// Half-width (integer number of cells) past which the envelope is below amplitude_floor.
double ansatz_half_width(NLDParams const& params, DiracPointData const& dirac, double delta,
                         double amplitude_floor = 1e-8);

/// sqrt(delta) (U0 + delta U1) on [-L, L] with spacing h. Pass no corrector for U0 alone.
TwoScaleField assemble_udelta(DiracPointData const& dirac, SpinorProfile const& profile,
                              CorrectorSolution const* corrector, double delta, double L, double h);

/// (-d^2 + V + delta W - mu_delta) u - u^3 with 4th-order differences; zero on
/// the five samples nearest each end.
std::vector<double> residual_field(TwoScaleField const& field, PeriodicPotential const& V,
                                   PeriodicPotential const& W);

/// Discrete L2 norm of residual_field.
double residual_norm(TwoScaleField const& field, PeriodicPotential const& V, PeriodicPotential const& W);

/// Least-squares slope of log(values) against log(deltas).
double fitted_order(std::vector<double> const& deltas, std::vector<double> const& values);

} // namespace diracsol

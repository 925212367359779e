#pragma once

#include <optional>
#include <vector>

#include "diracsol/banded.hpp"
#include "diracsol/dirac_point.hpp"
#include "diracsol/nld.hpp"
#include "diracsol/potential.hpp"

namespace diracsol {

enum class Parity
{
    Even,
    Odd
};

/// Even for theta > 0, odd for theta < 0.
Parity parity_for(double theta_sharp);

enum class FdOrder
{
    Second,
    Fourth
};

/// Points x_j = j h on [0, L). Even parity keeps x = 0 as an unknown with half
/// weight; odd parity pins u(0) = 0 and starts at x = h. u(L) = 0.
struct HalfLineGrid
{
    double h{0};
    long n{0};
    Parity parity{Parity::Even};

    double x(long j) const
    {
        return (parity == Parity::Even ? j : j + 1) * h;
    }

    double weight(long j) const
    {
        return (parity == Parity::Even && j == 0) ? 0.5 : 1.0;
    }

    double half_width() const
    {
        return (parity == Parity::Even ? n : n + 1) * h;
    }

    std::vector<double> points() const;
};

/// Finite-difference -d^2/dx^2 + V + delta W - mu on the half line. The stored
/// matrix is the weighted operator diag(w) A, which is symmetric.
struct HalfLineOperator
{
    HalfLineGrid grid;
    double delta{0};
    double mu_delta{0};
    SymmetricBanded weighted;

    /// A u, i.e. the unweighted operator.
    std::vector<double> apply(std::vector<double> const& u) const;

    /// sqrt(2 h sum w_j r_j^2): the full-line L2 norm of a field of this parity.
    double norm(std::vector<double> const& r) const;
};

HalfLineOperator discretize_operator(PeriodicPotential const& V, PeriodicPotential const& W, double delta,
                                     double mu_delta, double h, double L, Parity parity,
                                     FdOrder order = FdOrder::Fourth);

struct NewtonConfig
{
    int max_iters{25};
    double tol{1e-10};
    double damping{1.0};
    Parity parity{Parity::Even};
    /// Norm of the ansatz; a result smaller than half of it counts as trivial.
    /// Zero means: use the initial guess.
    double reference_norm{0};
};

struct SolitonField
{
    double delta{0};
    double mu_delta{0};
    HalfLineGrid grid;
    std::vector<double> samples;
    std::vector<double> newton_history;
    int iterations{0};
    double final_residual{0};
    /// log(r_k / r_{k-1}) / log(r_{k-1} / r_{k-2}) over the last three iterates; NaN if fewer.
    double convergence_order{0};
    double l2_error{0};
    double h2_error{0};
    double jacobian_min_eig{0};
};

/// Newton iteration on F(u) = A u - u^3 with banded solves and a halving line
/// search. Always takes at least one step.
SolitonField newton_solve(HalfLineOperator const& op, std::vector<double> initial, NewtonConfig const& cfg);

/// Smallest |eigenvalue| of the Jacobian A - 3 diag(u^2), symmetrized by the grid weights.
double jacobian_min_abs_eigenvalue(HalfLineOperator const& op, std::vector<double> const& u);

struct ErrorNorms
{
    double l2{0};
    double h2{0};
};

/// Full-line distances of u to reference (both given on the half-line grid);
/// H2 is sqrt(|e|^2 + |D2 e|^2) with second-order second differences.
ErrorNorms error_norms(HalfLineGrid const& grid, std::vector<double> const& u, std::vector<double> const& reference);

/// Distance of the solution to sqrt(delta) U0.
ErrorNorms error_vs_ansatz(SolitonField const& sol, DiracPointData const& dirac, SpinorProfile const& profile);

/// True iff |mu| < a |theta| and, when a gap report for the same delta and a is
/// given, it has no violations and mu* + delta mu lies in its interval.
bool frequency_window_check(DiracPointData const& dirac, double mu_sharp, double delta, double a,
                            GapReport const* report = nullptr);

/// Warm start from a solution at a larger delta: rescales the amplitude and
/// stretches the envelope while keeping the cell phase (period 2 in x).
std::vector<double> continuation_guess(SolitonField const& previous, HalfLineGrid const& grid, double delta);

} // namespace diracsol

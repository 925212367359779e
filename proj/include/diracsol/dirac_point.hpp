#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "diracsol/bloch.hpp"
#include "diracsol/cell_function.hpp"
#include "diracsol/potential.hpp"

namespace diracsol {

/// A doubly degenerate eigenvalue at k = pi with its Bloch pair and the
/// coefficients of the effective Dirac system.
struct DiracPointData
{
    /// 1-based indices (n, n+1) of the crossing bands.
    std::pair<int, int> band_pair{0, 0};
    double mu_star{0};
    /// Even-index eigenvector (real coefficients).
    CellFunction g1;
    /// Index-flipped partner, coefficients q_n = p_{-n-1}.
    CellFunction g2;
    double c_sharp{0};
    double theta_sharp{0};
    double beta1{0};
    double beta2{0};
    FourierCutoff cutoff;
};

struct ParityBlocks
{
    Eigen::MatrixXd even;
    Eigen::MatrixXd odd;
    std::vector<int> even_indices;
    std::vector<int> odd_indices;
};

/// Split the k = pi matrix into even- and odd-index blocks. Throws if any
/// cross-block entry exceeds 1e-14.
ParityBlocks parity_block_split(Eigen::MatrixXd const& at_pi, FourierCutoff const& cut);

/// Assembles the k = pi matrix of an even-index potential and splits it.
ParityBlocks parity_block_split(PeriodicPotential const& V, FourierCutoff const& cut);

/// Degeneracy tolerance 1e-8 (1 + |mu|).
double degeneracy_tolerance(double mu);

/// Locate the selector-th double eigenvalue at k = pi (selector 1 is the lowest)
/// and build g1, g2. Only band_pair, mu_star, g1, g2 and cutoff are set.
DiracPointData find_dirac_point(PeriodicPotential const& V, FourierCutoff const& cut, int selector);

/// c = 2i <g1', g1> = -2 sum (2 pi m + pi) |p_m|^2. Throws NumericalError when |c| < 1e-8.
double compute_c_sharp(DiracPointData const& data);

/// The same coefficient from g2: +2 sum (2 pi n + pi) |q_n|^2.
double c_sharp_from_g2(DiracPointData const& data);

/// theta = <W g2, g1>. Throws ValidationError for a W of the wrong parity or
/// one that does not couple the pair.
double compute_theta_sharp(DiracPointData const& data, PeriodicPotential const& W);

/// (int |g1|^4, int conj(g2)^2 g1^2) by trapezoid quadrature on max(2048, 8M+8) cell points.
std::pair<double, double> compute_betas(DiracPointData const& data);

/// find_dirac_point followed by all coefficients.
DiracPointData analyse_dirac_point(PeriodicPotential const& V, PeriodicPotential const& W, FourierCutoff const& cut,
                                   int selector);

struct BandSlopes
{
    /// Centered differences that swap band labels across k = pi.
    double slope_minus{0};
    double slope_plus{0};
    /// Slope of the branch that continues g1 through k = pi.
    double g1_branch{0};
};

BandSlopes band_slope_oracle(PeriodicPotential const& V, DiracPointData const& data, double h = 1e-4);

/// max over a cell grid of |conj(Phi_+) - Phi_-| and |Phi_+(-x) - Phi_-(x)|.
double bloch_pair_symmetry_defect(DiracPointData const& data, int samples = 257);

struct GapViolation
{
    double k;
    int band;
    double mu;
};

struct GapReport
{
    double delta{0};
    double a{0};
    double lower{0};
    double upper{0};
    std::vector<GapViolation> violations;
    /// Half the distance between bands n* and n*+1 of H + delta W at k = pi.
    double half_gap_at_pi{0};

    bool ok() const
    {
        return violations.empty();
    }
};

/// Default sweep: n_cluster points clustered around pi plus n_coarse uniform points, sorted.
std::vector<double> gap_k_grid(int n_cluster = 401, int n_coarse = 129);

GapReport verify_gap_opening(PeriodicPotential const& V, PeriodicPotential const& W, DiracPointData const& data,
                             double delta, double a, std::vector<double> const& k_grid);

} // namespace diracsol

#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "diracsol/potential.hpp"

namespace diracsol {

/// Plane waves e^{2 pi i m x} with |m| <= M.
struct FourierCutoff
{
    int M{64};

    int size() const
    {
        return 2 * M + 1;
    }

    /// Position of Fourier index m in a coefficient vector.
    int slot(int m) const
    {
        return m + M;
    }

    int index(int slot) const
    {
        return slot - M;
    }

    bool contains(int m) const
    {
        return m >= -M && m <= M;
    }

    /// Throws ValidationError unless M >= max_index + margin.
    void require(int max_index, int margin = 0) const;
};

/// Real symmetric plane-wave matrix of -(d/dx + ik)^2 + P at quasi-momentum k.
Eigen::MatrixXd assemble_fb_matrix(CosineSeries const& pot, double k, FourierCutoff const& cut);
Eigen::MatrixXd assemble_fb_matrix(PeriodicPotential const& pot, double k, FourierCutoff const& cut);

/// Full spectrum of the plane-wave matrix at one quasi-momentum.
///
/// The matrix is real, so the eigenvectors are stored as real columns; they
/// are valid complex coefficient vectors with zero imaginary part.
class BlochSolution
{
  private:
    double k_{0};
    FourierCutoff cut_;
    Eigen::VectorXd values_;
    Eigen::MatrixXd vectors_;

  public:
    BlochSolution() = default;
    BlochSolution(double k, FourierCutoff cut, Eigen::VectorXd values, Eigen::MatrixXd vectors)
        : k_(k)
        , cut_(cut)
        , values_(std::move(values))
        , vectors_(std::move(vectors))
    {
    }

    double k() const
    {
        return k_;
    }

    FourierCutoff const& cutoff() const
    {
        return cut_;
    }

    int num_bands() const
    {
        return static_cast<int>(values_.size());
    }

    /// Ascending eigenvalues; band n (0-based) is values()[n].
    Eigen::VectorXd const& values() const
    {
        return values_;
    }

    Eigen::MatrixXd const& vectors() const
    {
        return vectors_;
    }

    Eigen::VectorXcd eigenvector(int band) const;
};

/// Diagonalize at k. Eigenvectors inside a cluster with gaps below 1e-9 are
/// re-orthonormalized; each pair is checked against a residual bound.
BlochSolution solve_bands_at_k(CosineSeries const& pot, double k, FourierCutoff const& cut);
BlochSolution solve_bands_at_k(PeriodicPotential const& pot, double k, FourierCutoff const& cut);

struct BandSweep
{
    std::vector<double> k_grid;
    std::vector<BlochSolution> solutions;

    /// max_{n < n_bands} |mu_n(k) - mu_n(2 pi - k)| over grid points whose mirror is on the grid.
    double reflection_defect(int n_bands) const;
};

BandSweep band_sweep(CosineSeries const& pot, std::span<double const> k_grid, FourierCutoff const& cut);
BandSweep band_sweep(PeriodicPotential const& pot, std::span<double const> k_grid, FourierCutoff const& cut);

/// n points evenly spaced on [0, 2 pi], endpoints included.
std::vector<double> uniform_k_grid(int n);

/// e^{ikx} sum_m p_m e^{2 pi i m x} for one band of sol.
std::vector<std::complex<double>> bloch_wave_eval(BlochSolution const& sol, int band, std::span<double const> x);

/// Same, for a raw coefficient vector at quasi-momentum k.
std::vector<std::complex<double>> bloch_wave_eval(Eigen::VectorXcd const& coeffs, double k, std::span<double const> x);

/// Cell L2 inner product sum_m f_m conj(g_m).
std::complex<double> cell_inner_product(Eigen::VectorXcd const& f, Eigen::VectorXcd const& g);

} // namespace diracsol

#pragma once

#include <array>
#include <vector>

namespace diracsol {

/// Symmetric matrix with at most two nonzero super-diagonals, stored by diagonals.
class SymmetricBanded
{
  private:
    long n_{0};
    int bw_{0};
    std::array<std::vector<double>, 3> d_;

  public:
    SymmetricBanded() = default;

    SymmetricBanded(long n, int bandwidth);

    long size() const
    {
        return n_;
    }

    int bandwidth() const
    {
        return bw_;
    }

    /// Entry (i, i + k) for k in [0, bandwidth]; the (i + k, i) entry is the same storage.
    double& at(long i, int k)
    {
        return d_[k][i];
    }

    double at(long i, int k) const
    {
        return d_[k][i];
    }

    std::vector<double> apply(std::vector<double> const& x) const;
};

/// LU factorization of a banded matrix (LAPACK general band storage).
class BandedLU
{
  private:
    long n_{0};
    int kl_{0};
    std::vector<double> ab_;
    std::vector<int> ipiv_;

  public:
    explicit BandedLU(SymmetricBanded const& A);

    /// Solves in place.
    void solve(std::vector<double>& b) const;
};

/// Eigenvalue of smallest magnitude of the symmetric banded matrix, by inverse
/// subspace iteration with Rayleigh-Ritz on a block of `block` vectors.
double smallest_magnitude_eigenvalue(SymmetricBanded const& A, int block = 4, double tol = 1e-10,
                                     int max_iters = 500);

} // namespace diracsol

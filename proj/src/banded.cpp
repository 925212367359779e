#include "diracsol/banded.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Dense>
#include <lapacke.h>

#include "diracsol/errors.hpp"

namespace diracsol {

SymmetricBanded::SymmetricBanded(long n, int bandwidth)
    : n_(n)
    , bw_(bandwidth)
{
    if (n < 1 || bandwidth < 0 || bandwidth > 2) {
        throw ValidationError("banded matrix needs n >= 1 and bandwidth in [0, 2]");
    }
    for (int k = 0; k <= bw_; ++k) {
        d_[k].assign(n_, 0.0);
    }
}

std::vector<double> SymmetricBanded::apply(std::vector<double> const& x) const
{
    std::vector<double> y(n_, 0.0);
    for (long i = 0; i < n_; ++i) {
        double s = d_[0][i] * x[i];
        for (int k = 1; k <= bw_; ++k) {
            if (i + k < n_) {
                s += d_[k][i] * x[i + k];
            }
            if (i - k >= 0) {
                s += d_[k][i - k] * x[i - k];
            }
        }
        y[i] = s;
    }
    return y;
}

BandedLU::BandedLU(SymmetricBanded const& A)
    : n_(A.size())
    , kl_(A.bandwidth())
{
    int ku   = kl_;
    int ldab = 2 * kl_ + ku + 1;
    ab_.assign(static_cast<std::size_t>(ldab) * n_, 0.0);
    ipiv_.assign(n_, 0);
    auto entry = [&](long i, long j) -> double& { return ab_[(kl_ + ku + i - j) + j * ldab]; };
    for (long i = 0; i < n_; ++i) {
        entry(i, i) = A.at(i, 0);
        for (int k = 1; k <= kl_; ++k) {
            if (i + k < n_) {
                entry(i, i + k) = A.at(i, k);
                entry(i + k, i) = A.at(i, k);
            }
        }
    }
    lapack_int info = LAPACKE_dgbtrf(LAPACK_COL_MAJOR, n_, n_, kl_, ku, ab_.data(), ldab, ipiv_.data());
    if (info != 0) {
        std::ostringstream s;
        s << "banded LU factorization failed (info = " << info << ")";
        throw NumericalError(s.str());
    }
}

void BandedLU::solve(std::vector<double>& b) const
{
    int ldab        = 3 * kl_ + 1;
    lapack_int info = LAPACKE_dgbtrs(LAPACK_COL_MAJOR, 'N', n_, kl_, kl_, 1, ab_.data(), ldab, ipiv_.data(),
                                     b.data(), n_);
    if (info != 0) {
        throw NumericalError("banded triangular solve failed");
    }
}

double smallest_magnitude_eigenvalue(SymmetricBanded const& A, int block, double tol, int max_iters)
{
    long n = A.size();
    int p  = static_cast<int>(std::min<long>(block, n));
    BandedLU lu(A);

    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Eigen::MatrixXd X(n, p);
    for (long i = 0; i < n; ++i) {
        for (int j = 0; j < p; ++j) {
            X(i, j) = dist(rng);
        }
    }

    double prev = std::numeric_limits<double>::infinity();
    std::vector<double> col(n);
    for (int it = 0; it < max_iters; ++it) {
        for (int j = 0; j < p; ++j) {
            std::copy(X.col(j).data(), X.col(j).data() + n, col.begin());
            lu.solve(col);
            std::copy(col.begin(), col.end(), X.col(j).data());
        }
        Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
        Eigen::MatrixXd Q = qr.householderQ() * Eigen::MatrixXd::Identity(n, p);

        Eigen::MatrixXd AQ(n, p);
        for (int j = 0; j < p; ++j) {
            std::copy(Q.col(j).data(), Q.col(j).data() + n, col.begin());
            auto y = A.apply(col);
            std::copy(y.begin(), y.end(), AQ.col(j).data());
        }
        Eigen::MatrixXd T = Q.transpose() * AQ;
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ritz(0.5 * (T + T.transpose()));
        X = Q * ritz.eigenvectors();

        Eigen::Index imin;
        ritz.eigenvalues().cwiseAbs().minCoeff(&imin);
        double lambda = ritz.eigenvalues()(imin);
        if (std::abs(lambda - prev) <= tol * std::abs(lambda)) {
            return lambda;
        }
        prev = lambda;
    }
    throw NumericalError("inverse subspace iteration did not converge");
}

} // namespace diracsol

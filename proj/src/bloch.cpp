#include "diracsol/bloch.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "diracsol/errors.hpp"
#include "diracsol/parallel.hpp"

namespace diracsol {

namespace {

constexpr double two_pi = 2 * std::numbers::pi;

/// Modified Gram-Schmidt over columns [begin, end).
void orthonormalize_cluster(Eigen::MatrixXd& v, int begin, int end)
{
    for (int j = begin; j < end; ++j) {
        for (int i = begin; i < j; ++i) {
            v.col(j) -= v.col(i).dot(v.col(j)) * v.col(i);
        }
        v.col(j).normalize();
    }
}

} // namespace

void FourierCutoff::require(int max_index, int margin) const
{
    if (M < 1 || M < max_index + margin) {
        std::ostringstream s;
        s << "Fourier cutoff M = " << M << " is too small: the potential has index " << max_index
          << " and M must be at least " << max_index + margin;
        throw ValidationError(s.str());
    }
}

Eigen::MatrixXd assemble_fb_matrix(CosineSeries const& pot, double k, FourierCutoff const& cut)
{
    cut.require(max_index(pot));
    int n = cut.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    for (int s = 0; s < n; ++s) {
        double q = two_pi * cut.index(s) + k;
        A(s, s)  = q * q;
    }
    for (auto const& [m, amp] : pot) {
        for (int s = 0; s + m < n; ++s) {
            A(s, s + m) += 0.5 * amp;
            A(s + m, s) += 0.5 * amp;
        }
    }
    return A;
}

Eigen::MatrixXd assemble_fb_matrix(PeriodicPotential const& pot, double k, FourierCutoff const& cut)
{
    return assemble_fb_matrix(pot.coeffs(), k, cut);
}

Eigen::VectorXcd BlochSolution::eigenvector(int band) const
{
    if (band < 0 || band >= num_bands()) {
        throw ValidationError("band index " + std::to_string(band) + " outside the retained range");
    }
    return vectors_.col(band).cast<std::complex<double>>();
}

BlochSolution solve_bands_at_k(CosineSeries const& pot, double k, FourierCutoff const& cut)
{
    Eigen::MatrixXd A = assemble_fb_matrix(pot, k, cut);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(A);
    if (solver.info() != Eigen::Success) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
        auto sv = svd.singularValues();
        std::ostringstream s;
        s << "symmetric eigensolver did not converge at k = " << k << " (size " << A.rows()
          << ", largest singular value " << sv(0) << ", smallest " << sv(sv.size() - 1) << ")";
        throw NumericalError(s.str());
    }
    Eigen::VectorXd values  = solver.eigenvalues();
    Eigen::MatrixXd vectors = solver.eigenvectors();

    int n = static_cast<int>(values.size());
    for (int begin = 0; begin < n;) {
        int end = begin + 1;
        while (end < n && values(end) - values(end - 1) < 1e-9) {
            ++end;
        }
        if (end - begin > 1) {
            orthonormalize_cluster(vectors, begin, end);
        }
        begin = end;
    }

    for (int j = 0; j < n; ++j) {
        double r = (A * vectors.col(j) - values(j) * vectors.col(j)).lpNorm<Eigen::Infinity>();
        if (r > 1e-10 * (1 + std::abs(values(j)))) {
            std::ostringstream s;
            s << "eigenpair " << j << " at k = " << k << " has residual " << r;
            throw NumericalError(s.str());
        }
    }
    return BlochSolution(k, cut, std::move(values), std::move(vectors));
}

BlochSolution solve_bands_at_k(PeriodicPotential const& pot, double k, FourierCutoff const& cut)
{
    return solve_bands_at_k(pot.coeffs(), k, cut);
}

double BandSweep::reflection_defect(int n_bands) const
{
    double worst{0};
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        for (std::size_t j = 0; j < k_grid.size(); ++j) {
            if (std::abs(k_grid[i] + k_grid[j] - two_pi) > 1e-12) {
                continue;
            }
            int nb = std::min({n_bands, solutions[i].num_bands(), solutions[j].num_bands()});
            for (int n = 0; n < nb; ++n) {
                worst = std::max(worst, std::abs(solutions[i].values()(n) - solutions[j].values()(n)));
            }
        }
    }
    return worst;
}

BandSweep band_sweep(CosineSeries const& pot, std::span<double const> k_grid, FourierCutoff const& cut)
{
    for (double k : k_grid) {
        if (!(k >= 0 && k <= two_pi)) {
            throw ValidationError("quasi-momentum " + std::to_string(k) + " outside [0, 2 pi]");
        }
    }
    BandSweep sweep;
    sweep.k_grid.assign(k_grid.begin(), k_grid.end());
    sweep.solutions.resize(k_grid.size());
    parallel_for(k_grid.size(), [&](std::size_t i) { sweep.solutions[i] = solve_bands_at_k(pot, k_grid[i], cut); });
    return sweep;
}

BandSweep band_sweep(PeriodicPotential const& pot, std::span<double const> k_grid, FourierCutoff const& cut)
{
    return band_sweep(pot.coeffs(), k_grid, cut);
}

std::vector<double> uniform_k_grid(int n)
{
    if (n < 2) {
        throw ValidationError("a k-grid needs at least two points");
    }
    std::vector<double> k(n);
    for (int i = 0; i < n; ++i) {
        k[i] = two_pi * i / (n - 1);
    }
    // exact endpoints keep the reflection pairing exact
    k.back() = two_pi;
    for (int i = 0; i < n / 2; ++i) {
        k[n - 1 - i] = two_pi - k[i];
    }
    return k;
}

std::vector<std::complex<double>> bloch_wave_eval(Eigen::VectorXcd const& coeffs, double k, std::span<double const> x)
{
    int M = static_cast<int>(coeffs.size() - 1) / 2;
    std::vector<std::complex<double>> out(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        std::complex<double> s{0};
        for (int m = -M; m <= M; ++m) {
            auto c = coeffs(m + M);
            if (c != 0.0) {
                s += c * std::polar(1.0, (two_pi * m + k) * x[i]);
            }
        }
        out[i] = s;
    }
    return out;
}

std::vector<std::complex<double>> bloch_wave_eval(BlochSolution const& sol, int band, std::span<double const> x)
{
    return bloch_wave_eval(sol.eigenvector(band), sol.k(), x);
}

std::complex<double> cell_inner_product(Eigen::VectorXcd const& f, Eigen::VectorXcd const& g)
{
    if (f.size() != g.size()) {
        throw ValidationError("coefficient vectors use different Fourier cutoffs");
    }
    // Eigen's dot conjugates the first argument
    return g.dot(f);
}

} // namespace diracsol

#include "diracsol/dirac_point.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "diracsol/errors.hpp"

namespace diracsol {

namespace {

constexpr double pi = std::numbers::pi;

Eigen::VectorXd spectrum(Eigen::MatrixXd const& block)
{
    if (block.rows() == 0) {
        return {};
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(block, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("parity block eigensolver did not converge");
    }
    return solver.eigenvalues();
}

std::vector<double> cell_grid(int n)
{
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) {
        x[i] = static_cast<double>(i) / n;
    }
    return x;
}

void require_eigenvector(Eigen::MatrixXd const& A, CellFunction const& g, double mu, char const* name)
{
    double r = (A.cast<std::complex<double>>() * g.coeffs() - mu * g.coeffs()).lpNorm<Eigen::Infinity>();
    if (r > 1e-10 * (1 + std::abs(mu))) {
        std::ostringstream s;
        s << name << " fails the eigenvector check at k = pi (residual " << r << ")";
        throw NumericalError(s.str());
    }
}

} // namespace

ParityBlocks parity_block_split(Eigen::MatrixXd const& at_pi, FourierCutoff const& cut)
{
    int n = cut.size();
    if (at_pi.rows() != n || at_pi.cols() != n) {
        throw ValidationError("matrix size does not match the Fourier cutoff");
    }
    ParityBlocks blocks;
    for (int s = 0; s < n; ++s) {
        (cut.index(s) % 2 == 0 ? blocks.even_indices : blocks.odd_indices).push_back(cut.index(s));
    }
    for (int me : blocks.even_indices) {
        for (int mo : blocks.odd_indices) {
            if (std::abs(at_pi(cut.slot(me), cut.slot(mo))) > 1e-14) {
                std::ostringstream s;
                s << "k = pi matrix couples Fourier indices " << me << " and " << mo
                  << "; the even/odd split does not decouple it";
                throw NumericalError(s.str());
            }
        }
    }
    auto extract = [&](std::vector<int> const& idx) {
        Eigen::MatrixXd b(idx.size(), idx.size());
        for (std::size_t i = 0; i < idx.size(); ++i) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                b(i, j) = at_pi(cut.slot(idx[i]), cut.slot(idx[j]));
            }
        }
        return b;
    };
    blocks.even = extract(blocks.even_indices);
    blocks.odd  = extract(blocks.odd_indices);
    return blocks;
}

ParityBlocks parity_block_split(PeriodicPotential const& V, FourierCutoff const& cut)
{
    if (V.parity() != ParityClass::EvenIndex) {
        throw ValidationError("the parity split at k = pi needs an even-index potential");
    }
    return parity_block_split(assemble_fb_matrix(V, pi, cut), cut);
}

double degeneracy_tolerance(double mu)
{
    return 1e-8 * (1 + std::abs(mu));
}

DiracPointData find_dirac_point(PeriodicPotential const& V, FourierCutoff const& cut, int selector)
{
    if (selector < 1) {
        throw ValidationError("crossing selector must be a positive ordinal");
    }
    ParityBlocks blocks = parity_block_split(V, cut);
    Eigen::VectorXd ev  = spectrum(blocks.even);
    Eigen::VectorXd od  = spectrum(blocks.odd);

    std::vector<double> all(ev.data(), ev.data() + ev.size());
    all.insert(all.end(), od.data(), od.data() + od.size());
    std::sort(all.begin(), all.end());

    int lo = 2 * selector - 2;
    if (lo + 1 >= static_cast<int>(all.size())) {
        throw ValidationError("crossing selector " + std::to_string(selector) + " exceeds the retained spectrum");
    }
    double mu_a = all[lo];
    double mu_b = all[lo + 1];
    double mu   = 0.5 * (mu_a + mu_b);
    double tol  = degeneracy_tolerance(mu);
    if (std::abs(mu_b - mu_a) > tol) {
        std::ostringstream s;
        s << "not a Dirac point: bands " << lo + 1 << " and " << lo + 2 << " at k = pi differ by " << mu_b - mu_a
          << " (tolerance " << tol << ")";
        throw NumericalError(s.str());
    }

    std::vector<int> hits;
    for (int i = 0; i < ev.size(); ++i) {
        if (std::abs(ev(i) - mu) <= tol) {
            hits.push_back(i);
        }
    }
    if (hits.size() != 1) {
        std::ostringstream s;
        s << "ambiguous crossing at mu = " << mu << ": the even-index block holds " << hits.size()
          << " eigenvalues within " << tol;
        throw NumericalError(s.str());
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(blocks.even);
    Eigen::VectorXd pe = solver.eigenvectors().col(hits.front());
    Eigen::Index imax;
    pe.cwiseAbs().maxCoeff(&imax);
    if (pe(imax) < 0) {
        pe = -pe;
    }

    Eigen::VectorXcd p = Eigen::VectorXcd::Zero(cut.size());
    for (std::size_t i = 0; i < blocks.even_indices.size(); ++i) {
        p(cut.slot(blocks.even_indices[i])) = pe(i);
    }
    p.normalize();

    DiracPointData d;
    d.band_pair = {lo + 1, lo + 2};
    d.mu_star   = ev(hits.front());
    d.g1        = CellFunction(std::move(p));
    d.g2        = d.g1.reflected();
    d.cutoff    = cut;

    Eigen::MatrixXd A = assemble_fb_matrix(V, pi, cut);
    require_eigenvector(A, d.g1, d.mu_star, "g1");
    require_eigenvector(A, d.g2, d.mu_star, "g2");
    return d;
}

double compute_c_sharp(DiracPointData const& data)
{
    auto const& p = data.g1.coeffs();
    int M         = data.g1.M();
    double s{0};
    for (int m = -M; m <= M; ++m) {
        s += (2 * pi * m + pi) * std::norm(p(m + M));
    }
    double c = -2 * s;
    if (std::abs(c) < 1e-8) {
        throw NumericalError("degenerate crossing (quadratic touching): |c| = " + std::to_string(std::abs(c)));
    }
    double c2 = c_sharp_from_g2(data);
    if (std::abs(c - c2) > 1e-12 * (1 + std::abs(c))) {
        std::ostringstream s;
        s << "slope coefficient from g1 (" << c << ") and g2 (" << c2 << ") disagree";
        throw NumericalError(s.str());
    }
    return c;
}

double c_sharp_from_g2(DiracPointData const& data)
{
    auto const& q = data.g2.coeffs();
    int M         = data.g2.M();
    double s{0};
    for (int n = -M; n <= M; ++n) {
        s += (2 * pi * n + pi) * std::norm(q(n + M));
    }
    return 2 * s;
}

double compute_theta_sharp(DiracPointData const& data, PeriodicPotential const& W)
{
    if (W.parity() != ParityClass::OddIndex) {
        throw ValidationError("the gap-opening perturbation must be an odd-index potential");
    }
    std::complex<double> t = inner(data.g2.times(W.coeffs()), data.g1);
    if (std::abs(t.imag()) > 1e-12 * (1 + std::abs(t))) {
        throw NumericalError("coupling coefficient has imaginary part " + std::to_string(t.imag()));
    }
    if (std::abs(t.real()) < 1e-10) {
        throw ValidationError("W does not open a gap at this Dirac point (coupling " + std::to_string(t.real()) + ")");
    }
    return t.real();
}

std::pair<double, double> compute_betas(DiracPointData const& data)
{
    int n      = std::max(2048, 8 * data.g1.M() + 8);
    auto x     = cell_grid(n);
    auto minus = bloch_wave_eval(data.g1.coeffs(), pi, x);
    auto plus  = bloch_wave_eval(data.g2.coeffs(), pi, x);
    double b1{0};
    std::complex<double> b2{0};
    for (int i = 0; i < n; ++i) {
        b1 += std::norm(plus[i]) * std::norm(minus[i]);
        b2 += std::conj(plus[i] * plus[i]) * minus[i] * minus[i];
    }
    b1 /= n;
    b2 /= n;
    if (std::abs(b2.imag()) > 1e-10) {
        throw NumericalError("quartic coefficient has imaginary part " + std::to_string(b2.imag()));
    }
    if (!(b1 > 0) || std::abs(b2.real()) > b1 * (1 + 1e-12)) {
        throw NumericalError("quartic coefficients violate 0 <= |beta2| <= beta1");
    }
    return {b1, b2.real()};
}

DiracPointData analyse_dirac_point(PeriodicPotential const& V, PeriodicPotential const& W, FourierCutoff const& cut,
                                   int selector)
{
    DiracPointData d = find_dirac_point(V, cut, selector);
    d.c_sharp        = compute_c_sharp(d);
    d.theta_sharp    = compute_theta_sharp(d, W);
    std::tie(d.beta1, d.beta2) = compute_betas(d);
    return d;
}

BandSlopes band_slope_oracle(PeriodicPotential const& V, DiracPointData const& data, double h)
{
    int n      = data.band_pair.first - 1;
    auto right = solve_bands_at_k(V, pi + h, data.cutoff);
    auto left  = solve_bands_at_k(V, pi - h, data.cutoff);

    BandSlopes s;
    s.slope_minus = (right.values()(n) - left.values()(n + 1)) / (2 * h);
    s.slope_plus  = (right.values()(n + 1) - left.values()(n)) / (2 * h);

    auto follow = [&](BlochSolution const& sol) {
        double o0 = std::abs(cell_inner_product(sol.eigenvector(n), data.g1.coeffs()));
        double o1 = std::abs(cell_inner_product(sol.eigenvector(n + 1), data.g1.coeffs()));
        return sol.values()(o0 >= o1 ? n : n + 1);
    };
    s.g1_branch = (follow(right) - follow(left)) / (2 * h);
    return s;
}

double bloch_pair_symmetry_defect(DiracPointData const& data, int samples)
{
    std::vector<double> x(samples), xm(samples);
    for (int i = 0; i < samples; ++i) {
        x[i]  = -1 + 2.0 * i / (samples - 1);
        xm[i] = -x[i];
    }
    auto fm  = bloch_wave_eval(data.g1.coeffs(), pi, x);
    auto fp  = bloch_wave_eval(data.g2.coeffs(), pi, x);
    auto fmr = bloch_wave_eval(data.g1.coeffs(), pi, xm);
    auto fpr = bloch_wave_eval(data.g2.coeffs(), pi, xm);
    double worst{0};
    for (int i = 0; i < samples; ++i) {
        worst = std::max({worst, std::abs(std::conj(fp[i]) - fm[i]), std::abs(std::conj(fm[i]) - fp[i]),
                          std::abs(fpr[i] - fm[i]), std::abs(fmr[i] - fp[i])});
    }
    return worst;
}

std::vector<double> gap_k_grid(int n_cluster, int n_coarse)
{
    std::vector<double> k;
    for (int i = 0; i < n_cluster; ++i) {
        double t = n_cluster > 1 ? -1 + 2.0 * i / (n_cluster - 1) : 0.0;
        k.push_back(pi + pi * t * t * t);
    }
    if (n_cluster % 2 == 1) {
        k[n_cluster / 2] = pi;
    }
    auto coarse = uniform_k_grid(std::max(2, n_coarse));
    k.insert(k.end(), coarse.begin(), coarse.end());
    std::sort(k.begin(), k.end());
    k.erase(std::unique(k.begin(), k.end(), [](double a, double b) { return std::abs(a - b) < 1e-14; }), k.end());
    return k;
}

GapReport verify_gap_opening(PeriodicPotential const& V, PeriodicPotential const& W, DiracPointData const& data,
                             double delta, double a, std::vector<double> const& k_grid)
{
    if (!(a > 0 && a < 1)) {
        throw ValidationError("gap fraction a must lie in (0, 1)");
    }
    if (!(delta >= 0)) {
        throw ValidationError("gap check needs delta >= 0");
    }
    double theta = data.theta_sharp != 0 ? data.theta_sharp : compute_theta_sharp(data, W);

    GapReport r;
    r.delta = delta;
    r.a     = a;
    r.lower = data.mu_star - a * delta * std::abs(theta);
    r.upper = data.mu_star + a * delta * std::abs(theta);

    auto pot   = combine(V, W, delta);
    auto sweep = band_sweep(pot, k_grid, data.cutoff);
    double tol = degeneracy_tolerance(data.mu_star);
    for (std::size_t i = 0; i < k_grid.size(); ++i) {
        auto const& vals = sweep.solutions[i].values();
        for (int n = 0; n < vals.size(); ++n) {
            double mu   = vals(n);
            bool inside = (mu > r.lower && mu < r.upper) || (delta == 0 && std::abs(mu - data.mu_star) <= tol);
            if (inside) {
                r.violations.push_back({k_grid[i], n + 1, mu});
            }
        }
    }
    auto at_pi       = solve_bands_at_k(pot, pi, data.cutoff);
    int n            = data.band_pair.first - 1;
    r.half_gap_at_pi = 0.5 * (at_pi.values()(n + 1) - at_pi.values()(n));
    return r;
}

} // namespace diracsol

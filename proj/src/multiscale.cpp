#include "diracsol/multiscale.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "diracsol/errors.hpp"
#include "diracsol/parallel.hpp"

namespace diracsol {

namespace {

constexpr double pi = std::numbers::pi;

/// Split [0, n) into contiguous blocks for parallel_for.
template <typename Body>
void for_blocks(std::size_t n, Body&& body)
{
    constexpr std::size_t block = 1 << 14;
    std::size_t nblocks         = (n + block - 1) / block;
    parallel_for(nblocks, [&](std::size_t b) { body(b * block, std::min(n, (b + 1) * block)); });
}

} // namespace

Eigen::VectorXcd SeparableForcing::at(std::size_t i) const
{
    Eigen::VectorXcd g = Eigen::VectorXcd::Zero(x_profiles[0].coeffs().size());
    for (int j = 0; j < forcing_terms; ++j) {
        g += y_factors[i][j] * x_profiles[j].coeffs();
    }
    return g;
}

std::array<CellFunction, forcing_terms> forcing_x_profiles(DiracPointData const& dirac, PeriodicPotential const& W,
                                                         double mu_sharp)
{
    auto const& m = dirac.g1;
    auto const& p = dirac.g2;
    return {2.0 * m.derivative(),
            2.0 * p.derivative(),
            mu_sharp * m - m.times(W.coeffs()),
            mu_sharp * p - p.times(W.coeffs()),
            cubic_product(m, m, m),
            cubic_product(m, m, p),
            cubic_product(p, p, m),
            cubic_product(p, p, p),
            2.0 * cubic_product(p, m, m),
            2.0 * cubic_product(m, p, p)};
}

ForcingFactors forcing_y_factors(double u, double v, double du, double dv)
{
    std::complex<double> m(0.5 * u, 0.5 * v);
    std::complex<double> dm(0.5 * du, 0.5 * dv);
    auto p  = std::conj(m);
    auto dp = std::conj(dm);
    return {dm, dp, m, p, std::norm(m) * m, m * m * std::conj(p), p * p * std::conj(m), std::norm(p) * p,
            std::norm(m) * p, std::norm(p) * m};
}

SeparableForcing build_G1(DiracPointData const& dirac, PeriodicPotential const& W, SpinorProfile const& profile)
{
    SeparableForcing f;
    f.x_profiles = forcing_x_profiles(dirac, W, profile.params.mu_sharp);
    f.y_grid     = profile.y;
    f.y_factors.resize(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        f.y_factors[i] = forcing_y_factors(profile.u[i], profile.v[i], profile.du[i], profile.dv[i]);
    }
    return f;
}

SolvabilityReport solvability_check(SeparableForcing const& forcing, DiracPointData const& dirac)
{
    std::array<std::complex<double>, forcing_terms> on1, on2;
    for (int j = 0; j < forcing_terms; ++j) {
        on1[j] = inner(forcing.x_profiles[j], dirac.g1);
        on2[j] = inner(forcing.x_profiles[j], dirac.g2);
    }
    SolvabilityReport r;
    for (std::size_t i = 0; i < forcing.y_grid.size(); ++i) {
        std::complex<double> p1{0}, p2{0};
        for (int j = 0; j < forcing_terms; ++j) {
            p1 += forcing.y_factors[i][j] * on1[j];
            p2 += forcing.y_factors[i][j] * on2[j];
        }
        double proj = std::max(std::abs(p1), std::abs(p2));
        if (proj > r.max_projection) {
            r.max_projection = proj;
            r.worst_y        = forcing.y_grid[i];
        }
        r.max_forcing_norm = std::max(r.max_forcing_norm, forcing.at(i).norm());
    }
    r.relative = r.max_forcing_norm > 0 ? r.max_projection / r.max_forcing_norm : 0.0;
    return r;
}

CorrectorSolution solve_U1(SeparableForcing const& forcing, DiracPointData const& dirac, PeriodicPotential const& V)
{
    FourierCutoff cut = dirac.cutoff;
    Eigen::MatrixXcd L =
        assemble_fb_matrix(V, pi, cut).cast<std::complex<double>>() -
        dirac.mu_star * Eigen::MatrixXcd::Identity(cut.size(), cut.size());

    CorrectorSolution sol;
    auto spectrum = solve_bands_at_k(V, pi, cut).values();
    int n         = dirac.band_pair.first - 1;
    double gap    = std::numeric_limits<double>::infinity();
    for (int i = 0; i < spectrum.size(); ++i) {
        if (i != n && i != n + 1 && std::abs(spectrum(i) - dirac.mu_star) < gap) {
            gap                          = std::abs(spectrum(i) - dirac.mu_star);
            sol.nearest_other_eigenvalue = spectrum(i);
        }
    }
    if (gap < 1e-6) {
        std::ostringstream s;
        s << "corrector system is near-singular: band value " << sol.nearest_other_eigenvalue << " lies within "
          << gap << " of mu* = " << dirac.mu_star;
        throw NumericalError(s.str());
    }

    auto const& g1 = dirac.g1.coeffs();
    auto const& g2 = dirac.g2.coeffs();
    Eigen::MatrixXcd shifted = L + g1 * g1.adjoint() + g2 * g2.adjoint();
    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(shifted);
    for (int j = 0; j < forcing_terms; ++j) {
        Eigen::VectorXcd f = forcing.x_profiles[j].coeffs();
        f -= g1.dot(f) * g1 + g2.dot(f) * g2;
        Eigen::VectorXcd h = lu.solve(f);
        double scale       = 1 + f.norm();
        sol.max_residual   = std::max(sol.max_residual, (L * h - f).norm() / scale);
        sol.max_kernel_overlap =
            std::max({sol.max_kernel_overlap, std::abs(g1.dot(h)), std::abs(g2.dot(h))});
        sol.x_profiles[j] = CellFunction(std::move(h));
    }
    if (sol.max_residual > 1e-10) {
        std::ostringstream s;
        s << "corrector solve residual " << sol.max_residual << " exceeds 1e-10";
        throw NumericalError(s.str());
    }
    return sol;
}

std::vector<double> build_U0(DiracPointData const& dirac, SpinorProfile const& profile, double delta,
                             std::vector<double> const& x_grid)
{
    CellEvaluator eval({dirac.g1});
    std::vector<double> out(x_grid.size());
    for_blocks(x_grid.size(), [&](std::size_t begin, std::size_t end) {
        std::complex<double> g;
        for (std::size_t i = begin; i < end; ++i) {
            auto s = profile.at(delta * x_grid[i]);
            eval.evaluate(x_grid[i], {&g, 1});
            out[i] = (std::complex<double>(s.u, s.v) * g).real();
        }
    });
    return out;
}

double ansatz_half_width(NLDParams const& params, DiracPointData const& dirac, double delta, double amplitude_floor)
{
    if (!(delta > 0)) {
        throw ValidationError("delta must be positive: no soliton exists at delta = 0");
    }
    auto ic      = initial_condition(params);
    double peak  = std::sqrt(delta) * std::hypot(ic[0], ic[1]) * dirac.g1.coeffs().cwiseAbs().sum();
    double decay = std::max(10.0, std::log(2 * peak / amplitude_floor));
    return std::ceil(decay * params.decay_length() / delta);
}

TwoScaleField assemble_udelta(DiracPointData const& dirac, SpinorProfile const& profile,
                              CorrectorSolution const* corrector, double delta, double L, double h)
{
    if (!(delta > 0 && delta < 1)) {
        throw ValidationError("delta must lie in (0, 1); no soliton exists at delta = 0");
    }
    if (!(h > 0) || !(L > 0)) {
        throw ValidationError("grid spacing and half-width must be positive");
    }
    if (delta * L > profile.y_max() * (1 + 1e-12)) {
        std::ostringstream s;
        s << "domain half-width " << L << " needs the envelope up to y = " << delta * L << " but the profile ends at "
          << profile.y_max();
        throw ValidationError(s.str());
    }
    TwoScaleField f;
    f.delta    = delta;
    f.mu_delta = dirac.mu_star + delta * profile.params.mu_sharp;
    f.h        = h;
    f.n        = std::lround(L / h);
    std::size_t size = 2 * f.n + 1;
    f.samples.resize(size);
    f.u0.resize(size);
    if (corrector) {
        f.u1.resize(size);
    }

    std::vector<CellFunction> fns{dirac.g1};
    if (corrector) {
        fns.insert(fns.end(), corrector->x_profiles.begin(), corrector->x_profiles.end());
    }
    CellEvaluator eval(fns);
    double sd = std::sqrt(delta);
    for_blocks(size, [&](std::size_t begin, std::size_t end) {
        std::vector<std::complex<double>> vals(fns.size());
        for (std::size_t i = begin; i < end; ++i) {
            double x = f.x(i);
            auto s   = profile.at(delta * x);
            eval.evaluate(x, vals);
            f.u0[i]    = (std::complex<double>(s.u, s.v) * vals[0]).real();
            double tot = f.u0[i];
            if (corrector) {
                auto g = forcing_y_factors(s.u, s.v, s.du, s.dv);
                std::complex<double> u1{0};
                for (int j = 0; j < forcing_terms; ++j) {
                    u1 += g[j] * vals[j + 1];
                }
                f.u1[i] = u1.real();
                tot += delta * f.u1[i];
            }
            f.samples[i] = sd * tot;
        }
    });
    return f;
}

std::vector<double> residual_field(TwoScaleField const& field, PeriodicPotential const& V, PeriodicPotential const& W)
{
    auto pot       = combine(V, W, field.delta);
    auto const& u  = field.samples;
    std::size_t n  = u.size();
    double inv     = 1 / (12 * field.h * field.h);
    std::vector<double> r(n, 0.0);
    if (n < 11) {
        return r;
    }
    for_blocks(n - 10, [&](std::size_t begin, std::size_t end) {
        for (std::size_t k = begin; k < end; ++k) {
            std::size_t i = k + 5;
            double lap    = (-u[i - 2] + 16 * u[i - 1] - 30 * u[i] + 16 * u[i + 1] - u[i + 2]) * inv;
            double x      = field.x(i);
            r[i]          = -lap + (evaluate(pot, x) - field.mu_delta) * u[i] - u[i] * u[i] * u[i];
        }
    });
    return r;
}

double residual_norm(TwoScaleField const& field, PeriodicPotential const& V, PeriodicPotential const& W)
{
    auto r = residual_field(field, V, W);
    double s{0};
    for (double ri : r) {
        s += ri * ri;
    }
    return std::sqrt(field.h * s);
}

double fitted_order(std::vector<double> const& deltas, std::vector<double> const& values)
{
    if (deltas.size() != values.size() || deltas.size() < 2) {
        throw ValidationError("an order fit needs at least two (delta, value) pairs");
    }
    double n = static_cast<double>(deltas.size());
    double mx{0}, my{0};
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        mx += std::log(deltas[i]);
        my += std::log(values[i]);
    }
    mx /= n;
    my /= n;
    double sxx{0}, sxy{0};
    for (std::size_t i = 0; i < deltas.size(); ++i) {
        double dx = std::log(deltas[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(values[i]) - my);
    }
    return sxy / sxx;
}

} // namespace diracsol

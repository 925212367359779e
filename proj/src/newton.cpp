#include "diracsol/newton.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <sstream>

#include "diracsol/errors.hpp"
#include "diracsol/multiscale.hpp"

namespace diracsol {

namespace {

std::string history_string(std::vector<double> const& h)
{
    std::ostringstream s;
    s << "[";
    for (std::size_t i = 0; i < h.size(); ++i) {
        s << (i ? ", " : "") << h[i];
    }
    s << "]";
    return s.str();
}

std::vector<double> nonlinear_residual(HalfLineOperator const& op, std::vector<double> const& u)
{
    auto F = op.apply(u);
    for (std::size_t j = 0; j < u.size(); ++j) {
        F[j] -= u[j] * u[j] * u[j];
    }
    return F;
}

SymmetricBanded weighted_jacobian(HalfLineOperator const& op, std::vector<double> const& u)
{
    SymmetricBanded J = op.weighted;
    for (long j = 0; j < J.size(); ++j) {
        J.at(j, 0) -= 3 * op.grid.weight(j) * u[j] * u[j];
    }
    return J;
}

} // namespace

Parity parity_for(double theta_sharp)
{
    return theta_sharp > 0 ? Parity::Even : Parity::Odd;
}

std::vector<double> HalfLineGrid::points() const
{
    std::vector<double> x(n);
    for (long j = 0; j < n; ++j) {
        x[j] = this->x(j);
    }
    return x;
}

std::vector<double> HalfLineOperator::apply(std::vector<double> const& u) const
{
    auto y = weighted.apply(u);
    for (long j = 0; j < grid.n; ++j) {
        y[j] /= grid.weight(j);
    }
    return y;
}

double HalfLineOperator::norm(std::vector<double> const& r) const
{
    double s{0};
    for (long j = 0; j < grid.n; ++j) {
        s += grid.weight(j) * r[j] * r[j];
    }
    return std::sqrt(2 * grid.h * s);
}

HalfLineOperator discretize_operator(PeriodicPotential const& V, PeriodicPotential const& W, double delta,
                                     double mu_delta, double h, double L, Parity parity, FdOrder order)
{
    if (!(h > 0) || h > 1.0 / 64 * (1 + 1e-12)) {
        throw ValidationError("grid spacing must satisfy 0 < h <= 1/64");
    }
    long N = std::lround(L / h);
    if (N < 8) {
        throw ValidationError("half-line domain needs at least 8 grid points");
    }
    HalfLineOperator op;
    op.grid.h      = h;
    op.grid.parity = parity;
    op.grid.n      = parity == Parity::Even ? N : N - 1;
    op.delta       = delta;
    op.mu_delta    = mu_delta;

    std::vector<double> stencil;
    if (order == FdOrder::Fourth) {
        stencil = {1, -16, 30, -16, 1};
        for (auto& c : stencil) {
            c /= 12 * h * h;
        }
    } else {
        stencil = {-1 / (h * h), 2 / (h * h), -1 / (h * h)};
    }
    int bw = static_cast<int>(stencil.size() / 2);

    double ghost_sign = parity == Parity::Even ? 1.0 : -1.0;
    long shift        = parity == Parity::Even ? 0 : 1;
    auto pot          = combine(V, W, delta);
    long n            = op.grid.n;
    op.weighted       = SymmetricBanded(n, bw);

    // rows of the unweighted operator as (column, value) lists
    auto row = [&](long j) {
        std::map<long, double> r;
        long m = j + shift;
        for (int s = -bw; s <= bw; ++s) {
            long t      = m + s;
            double coef = stencil[s + bw];
            double sign = 1.0;
            if (t < 0) {
                t    = -t;
                sign = ghost_sign;
            }
            if (t >= N || (parity == Parity::Odd && t == 0)) {
                continue;
            }
            r[t - shift] += sign * coef;
        }
        r[j] += evaluate(pot, op.grid.x(j)) - mu_delta;
        return r;
    };

    for (long j = 0; j < n; ++j) {
        auto r = row(j);
        for (auto const& [col, val] : r) {
            long k = col - j;
            if (k < 0) {
                continue;
            }
            op.weighted.at(j, static_cast<int>(k)) = op.grid.weight(j) * val;
        }
        // the reflected rows near x = 0 must still give a symmetric weighted matrix
        if (j < 2 * bw) {
            for (auto const& [col, val] : r) {
                if (col < j) {
                    double mirror = op.weighted.at(col, static_cast<int>(j - col));
                    if (std::abs(op.grid.weight(j) * val - mirror) > 1e-12 * std::abs(mirror)) {
                        throw NumericalError("weighted half-line operator is not symmetric");
                    }
                }
            }
        }
    }
    return op;
}

SolitonField newton_solve(HalfLineOperator const& op, std::vector<double> initial, NewtonConfig const& cfg)
{
    if (static_cast<long>(initial.size()) != op.grid.n) {
        throw ValidationError("initial guess does not match the half-line grid");
    }
    if (cfg.parity != op.grid.parity) {
        throw ValidationError("Newton parity does not match the discretized operator");
    }
    if (!(cfg.tol > 0) || cfg.max_iters < 1 || !(cfg.damping > 0 && cfg.damping <= 1)) {
        throw ValidationError("Newton settings need tol > 0, max_iters >= 1 and damping in (0, 1]");
    }

    SolitonField sol;
    sol.delta    = op.delta;
    sol.mu_delta = op.mu_delta;
    sol.grid     = op.grid;
    double ref   = cfg.reference_norm > 0 ? cfg.reference_norm : op.norm(initial);

    std::vector<double> u = std::move(initial);
    auto F                = nonlinear_residual(op, u);
    double res            = op.norm(F);
    sol.newton_history.push_back(res);
    int iters = 0;
    while (!(iters >= 1 && res < cfg.tol)) {
        if (!std::isfinite(res)) {
            throw NumericalError("Newton residual is not finite; history " + history_string(sol.newton_history));
        }
        if (iters == cfg.max_iters) {
            std::ostringstream s;
            s << "Newton did not reach " << cfg.tol << " in " << cfg.max_iters << " iterations; history "
              << history_string(sol.newton_history) << "; try a smaller delta or a larger domain";
            throw NumericalError(s.str());
        }
        BandedLU lu(weighted_jacobian(op, u));
        std::vector<double> du(u.size());
        for (long j = 0; j < op.grid.n; ++j) {
            du[j] = -op.grid.weight(j) * F[j];
        }
        lu.solve(du);

        double alpha = cfg.damping;
        for (int halvings = 0;; ++halvings) {
            std::vector<double> trial(u);
            for (std::size_t j = 0; j < u.size(); ++j) {
                trial[j] += alpha * du[j];
            }
            auto Ft   = nonlinear_residual(op, trial);
            double rt = op.norm(Ft);
            if (rt < res || res < cfg.tol) {
                u   = std::move(trial);
                F   = std::move(Ft);
                res = rt;
                break;
            }
            if (halvings == 30) {
                throw NumericalError("Newton line search failed; history " + history_string(sol.newton_history));
            }
            alpha *= 0.5;
        }
        ++iters;
        sol.newton_history.push_back(res);
    }

    double unorm = op.norm(u);
    if (unorm < 0.5 * ref || unorm < 1e-8) {
        std::ostringstream s;
        s << "Newton converged to a trivial solution (norm " << unorm << " against reference " << ref
          << "); history " << history_string(sol.newton_history);
        throw NumericalError(s.str());
    }
    long per_cell = std::lround(1 / op.grid.h);
    double tail{0};
    for (long j = std::max(0L, op.grid.n - per_cell); j < op.grid.n; ++j) {
        tail = std::max(tail, std::abs(u[j]));
    }
    if (tail > 1e-8) {
        std::ostringstream s;
        s << "solution is " << tail << " in the last cell before x = " << op.grid.half_width()
          << "; enlarge the domain";
        throw NumericalError(s.str());
    }

    sol.samples        = std::move(u);
    sol.iterations     = iters;
    sol.final_residual = res;
    auto const& h      = sol.newton_history;
    if (h.size() >= 3) {
        std::size_t k         = h.size() - 1;
        sol.convergence_order = std::log(h[k] / h[k - 1]) / std::log(h[k - 1] / h[k - 2]);
    } else {
        sol.convergence_order = std::numeric_limits<double>::quiet_NaN();
    }
    return sol;
}

double jacobian_min_abs_eigenvalue(HalfLineOperator const& op, std::vector<double> const& u)
{
    SymmetricBanded J = weighted_jacobian(op, u);
    for (long j = 0; j < J.size(); ++j) {
        for (int k = 0; k <= J.bandwidth() && j + k < J.size(); ++k) {
            J.at(j, k) /= std::sqrt(op.grid.weight(j) * op.grid.weight(j + k));
        }
    }
    return std::abs(smallest_magnitude_eigenvalue(J));
}

ErrorNorms error_norms(HalfLineGrid const& grid, std::vector<double> const& u, std::vector<double> const& reference)
{
    if (static_cast<long>(u.size()) != grid.n || reference.size() != u.size()) {
        throw ValidationError("fields do not match the half-line grid");
    }
    long shift  = grid.parity == Parity::Even ? 0 : 1;
    double sign = grid.parity == Parity::Even ? 1.0 : -1.0;
    long N      = grid.n + shift;
    // e at physical index m >= -1, extended by parity and by zero past L
    auto e = [&](long m) -> double {
        if (m < 0) {
            return sign * (u[-m - shift] - reference[-m - shift]);
        }
        if (m >= N || m - shift < 0) {
            return 0.0;
        }
        return u[m - shift] - reference[m - shift];
    };
    double h = grid.h;
    double l2{0}, d2{0};
    for (long m = 0; m <= N; ++m) {
        double wgt = m == 0 ? 1.0 : 2.0;
        double em  = e(m);
        double dd  = (e(m - 1) - 2 * em + e(m + 1)) / (h * h);
        l2 += wgt * em * em;
        d2 += wgt * dd * dd;
    }
    return {std::sqrt(h * l2), std::sqrt(h * (l2 + d2))};
}

ErrorNorms error_vs_ansatz(SolitonField const& sol, DiracPointData const& dirac, SpinorProfile const& profile)
{
    auto ref  = build_U0(dirac, profile, sol.delta, sol.grid.points());
    double sd = std::sqrt(sol.delta);
    for (auto& r : ref) {
        r *= sd;
    }
    return error_norms(sol.grid, sol.samples, ref);
}

bool frequency_window_check(DiracPointData const& dirac, double mu_sharp, double delta, double a,
                            GapReport const* report)
{
    if (!(a > 0 && a < 1) || !(std::abs(mu_sharp) < a * std::abs(dirac.theta_sharp))) {
        return false;
    }
    if (report) {
        if (report->delta != delta || report->a != a) {
            throw ValidationError("gap report was computed for a different delta or fraction a");
        }
        double mu_delta = dirac.mu_star + delta * mu_sharp;
        return report->ok() && mu_delta > report->lower && mu_delta < report->upper;
    }
    return true;
}

std::vector<double> continuation_guess(SolitonField const& previous, HalfLineGrid const& grid, double delta)
{
    if (previous.grid.parity != grid.parity) {
        throw ValidationError("continuation needs matching parity");
    }
    double ratio = delta / previous.delta;
    double scale = std::sqrt(ratio);
    auto const& pg = previous.grid;
    long shift     = pg.parity == Parity::Even ? 0 : 1;
    std::vector<double> out(grid.n, 0.0);
    for (long j = 0; j < grid.n; ++j) {
        double x  = grid.x(j);
        double xp = 2 * std::floor(0.5 * x * ratio) + std::fmod(x, 2.0);
        double t  = xp / pg.h - shift;
        if (t < 0 || t >= pg.n - 1) {
            continue;
        }
        long i   = static_cast<long>(std::floor(t));
        double f = t - i;
        out[j]   = scale * ((1 - f) * previous.samples[i] + f * previous.samples[i + 1]);
    }
    return out;
}

} // namespace diracsol

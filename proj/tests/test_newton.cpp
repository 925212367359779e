#include <doctest.h>

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "diracsol/banded.hpp"
#include "diracsol/errors.hpp"
#include "diracsol/multiscale.hpp"
#include "diracsol/newton.hpp"

using namespace diracsol;

namespace {

SymmetricBanded random_banded(long n, int bw, unsigned seed)
{
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> U(-1, 1);
    SymmetricBanded A(n, bw);
    for (long i = 0; i < n; ++i) {
        A.at(i, 0) = 4 + U(rng);
        for (int k = 1; k <= bw && i + k < n; ++k) {
            A.at(i, k) = U(rng);
        }
    }
    return A;
}

Eigen::MatrixXd dense(SymmetricBanded const& A)
{
    Eigen::MatrixXd D = Eigen::MatrixXd::Zero(A.size(), A.size());
    for (long i = 0; i < A.size(); ++i) {
        for (int k = 0; k <= A.bandwidth() && i + k < A.size(); ++k) {
            D(i, i + k) = D(i + k, i) = A.at(i, k);
        }
    }
    return D;
}

struct Setup
{
    PeriodicPotential V{{{2, 20.0}}, ParityClass::EvenIndex};
    PeriodicPotential W{{{1, 1.0}}, ParityClass::OddIndex};
    DiracPointData d      = analyse_dirac_point(V, W, FourierCutoff{64}, 1);
    NLDParams params      = NLDParams::from_dirac(d, 0.0);
    SpinorProfile prof    = integrate_homoclinic(params);
    double delta          = 0.1;
    double h              = 1.0 / 64;
    double L              = ansatz_half_width(params, d, delta);
    HalfLineOperator op   = discretize_operator(V, W, delta, d.mu_star, h, L, parity_for(d.theta_sharp));
    std::vector<double> u0 = scaled_u0();

    std::vector<double> scaled_u0() const
    {
        auto u = build_U0(d, prof, delta, op.grid.points());
        for (auto& x : u) {
            x *= std::sqrt(delta);
        }
        return u;
    }
};

Setup const& setup()
{
    static Setup s;
    return s;
}

} // namespace

TEST_CASE("banded LU and smallest eigenvalue")
{
    auto A = random_banded(60, 2, 7);
    std::vector<double> b(60);
    for (int i = 0; i < 60; ++i) {
        b[i] = std::sin(i);
    }
    auto x = b;
    BandedLU(A).solve(x);
    auto Ax = A.apply(x);
    for (int i = 0; i < 60; ++i) {
        CHECK(Ax[i] == doctest::Approx(b[i]).epsilon(1e-12));
    }

    // shift so the spectrum straddles zero
    for (long i = 0; i < A.size(); ++i) {
        A.at(i, 0) -= 4.2;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(dense(A));
    double ref = es.eigenvalues().cwiseAbs().minCoeff();
    CHECK(std::abs(smallest_magnitude_eigenvalue(A)) == doctest::Approx(ref).epsilon(1e-8));
}

TEST_CASE("half-line Laplacian on manufactured modes")
{
    PeriodicPotential zero;
    double q = 2.0, L = 20;
    for (auto order : {FdOrder::Second, FdOrder::Fourth}) {
        double prev{0};
        for (double h : {1.0 / 64, 1.0 / 128}) {
            double err{0};
            for (auto par : {Parity::Even, Parity::Odd}) {
                auto op = discretize_operator(zero, zero, 0, 0, h, L, par, order);
                auto x  = op.grid.points();
                std::vector<double> u(x.size());
                for (std::size_t j = 0; j < x.size(); ++j) {
                    u[j] = par == Parity::Even ? std::cos(q * x[j]) : std::sin(q * x[j]);
                }
                auto Au = op.apply(u);
                for (std::size_t j = 0; j + 4 < x.size(); ++j) {
                    err = std::max(err, std::abs(Au[j] - q * q * u[j]));
                }
            }
            if (prev > 0) {
                double rate = std::log2(prev / err);
                CHECK(rate == doctest::Approx(order == FdOrder::Second ? 2.0 : 4.0).epsilon(0.05));
            }
            prev = err;
        }
    }
    CHECK_THROWS_AS(discretize_operator(zero, zero, 0, 0, 1.0 / 32, L, Parity::Even), ValidationError);
}

TEST_CASE("Newton from the ansatz, then from its own fixed point")
{
    auto const& s = setup();
    NewtonConfig cfg;
    cfg.parity         = s.op.grid.parity;
    cfg.reference_norm = s.op.norm(s.u0);
    auto sol           = newton_solve(s.op, s.u0, cfg);
    CHECK(sol.final_residual < 1e-10);
    CHECK(sol.iterations <= 8);
    CHECK(sol.newton_history.front() > sol.newton_history.back());

    auto again = newton_solve(s.op, sol.samples, cfg);
    CHECK(again.iterations == 1);
    double change{0};
    for (std::size_t j = 0; j < sol.samples.size(); ++j) {
        change = std::max(change, std::abs(again.samples[j] - sol.samples[j]));
    }
    CHECK(change < 1e-10);

    CHECK(jacobian_min_abs_eigenvalue(s.op, sol.samples) > 0);

    auto e = error_norms(s.op.grid, sol.samples, s.u0);
    CHECK(e.l2 <= e.h2);
    auto z = error_norms(s.op.grid, s.u0, s.u0);
    CHECK(z.l2 == 0.0);
    CHECK(z.h2 == 0.0);

    // warm start for a smaller delta
    double d2 = 0.05;
    auto op2  = discretize_operator(s.V, s.W, d2, s.d.mu_star, s.h, ansatz_half_width(s.params, s.d, d2),
                                    s.op.grid.parity);
    sol.delta = s.delta;
    auto g    = continuation_guess(sol, op2.grid, d2);
    NewtonConfig c2 = cfg;
    c2.reference_norm = 0.5 * op2.norm(g);
    auto sol2 = newton_solve(op2, g, c2);
    CHECK(sol2.final_residual < 1e-10);
}

TEST_CASE("zero initial guess is flagged as trivial")
{
    auto const& s = setup();
    NewtonConfig cfg;
    cfg.parity = s.op.grid.parity;
    std::vector<double> zero(s.op.grid.n, 0.0);
    CHECK_THROWS_AS(newton_solve(s.op, zero, cfg), NumericalError);
    cfg.parity = Parity::Odd;
    CHECK_THROWS_AS(newton_solve(s.op, s.u0, cfg), ValidationError);
}

TEST_CASE("frequency window")
{
    auto const& s = setup();
    double a      = 0.9;
    double th     = std::abs(s.d.theta_sharp);
    CHECK(frequency_window_check(s.d, 0.0, 0.05, a));
    CHECK_FALSE(frequency_window_check(s.d, a * th, 0.05, a));
    auto g = verify_gap_opening(s.V, s.W, s.d, 0.05, a, gap_k_grid(101, 33));
    CHECK(frequency_window_check(s.d, 0.5 * a * th, 0.05, a, &g));
    CHECK_THROWS_AS(frequency_window_check(s.d, 0.0, 0.1, a, &g), ValidationError);
}

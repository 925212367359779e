#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "diracsol/bloch.hpp"
#include "diracsol/errors.hpp"
#include "diracsol/potential.hpp"

using namespace diracsol;
using std::numbers::pi;

TEST_CASE("potential parity and validation")
{
    CHECK_NOTHROW(PeriodicPotential({{2, 20.0}, {4, -1.0}}, ParityClass::EvenIndex));
    CHECK_THROWS_AS(PeriodicPotential({{1, 1.0}}, ParityClass::EvenIndex), ValidationError);
    CHECK_THROWS_AS(PeriodicPotential({{2, 1.0}}, ParityClass::OddIndex), ValidationError);
    CHECK_THROWS_AS(PeriodicPotential({{0, 1.0}}, ParityClass::EvenIndex), ValidationError);
    CHECK_THROWS_AS(PeriodicPotential({{2, NAN}}, ParityClass::EvenIndex), ValidationError);
    CHECK_THROWS_AS(PeriodicPotential::from_pairs({{2, 1.0}, {2, 3.0}}, ParityClass::EvenIndex), ValidationError);

    PeriodicPotential V({{2, 20.0}, {4, 0.0}}, ParityClass::EvenIndex);
    CHECK(V.max_index() == 2);
    CHECK(V.pairs().size() == 1);
    CHECK(V(0.125) == doctest::Approx(20 * std::cos(4 * pi * 0.125)).epsilon(1e-14));
    CHECK(V(0.3) == doctest::Approx(V(1.3)).epsilon(1e-13));
    CHECK(V.sup_bound() == 20.0);
}

TEST_CASE("combined potential")
{
    PeriodicPotential V({{2, 20.0}}, ParityClass::EvenIndex);
    PeriodicPotential W({{1, 1.0}, {3, 0.5}}, ParityClass::OddIndex);
    auto s = combine(V, W, 0.1);
    CHECK(max_index(s) == 3);
    for (double x : {0.0, 0.17, 0.5, 0.91}) {
        CHECK(evaluate(s, x) == doctest::Approx(V(x) + 0.1 * W(x)).epsilon(1e-13));
    }
}

TEST_CASE("plane-wave matrix")
{
    FourierCutoff cut{2};
    CosineSeries v{{2, 20.0}};
    auto H = assemble_fb_matrix(v, pi, cut);
    CHECK(H.rows() == 5);
    // diagonal (2 pi m + k)^2, off-diagonals half the amplitude at distance 2
    CHECK(H(cut.slot(0), cut.slot(0)) == doctest::Approx(pi * pi));
    CHECK(H(cut.slot(-1), cut.slot(-1)) == doctest::Approx(pi * pi));
    CHECK(H(cut.slot(-2), cut.slot(0)) == 10.0);
    CHECK(H(cut.slot(-1), cut.slot(0)) == 0.0);
    CHECK((H - H.transpose()).norm() == 0.0);
    CHECK_THROWS_AS(assemble_fb_matrix(CosineSeries{{3, 1.0}}, 0.0, cut), ValidationError);
    CHECK_THROWS_AS(FourierCutoff{2}.require(2, 2), ValidationError);
}

TEST_CASE("free bands are the folded parabola")
{
    FourierCutoff cut{16};
    PeriodicPotential zero;
    for (double k : {0.0, 0.7, pi, 5.1}) {
        auto sol = solve_bands_at_k(zero, k, cut);
        std::vector<double> expect;
        for (int m = -16; m <= 16; ++m) {
            expect.push_back((2 * pi * m + k) * (2 * pi * m + k));
        }
        std::sort(expect.begin(), expect.end());
        for (int n = 0; n < 6; ++n) {
            CHECK(sol.values()[n] == doctest::Approx(expect[n]).epsilon(1e-13));
        }
    }
}

TEST_CASE("band sweep symmetry and eigenpairs")
{
    FourierCutoff cut{24};
    PeriodicPotential V({{2, 20.0}}, ParityClass::EvenIndex);
    auto k  = uniform_k_grid(17);
    CHECK(k.front() == 0.0);
    CHECK(k.back() == doctest::Approx(2 * pi).epsilon(1e-15));
    auto sw = band_sweep(V, k, cut);
    CHECK(sw.reflection_defect(6) < 1e-9);

    auto sol = sw.solutions[5];
    auto H   = assemble_fb_matrix(V, sol.k(), cut);
    for (int n = 0; n < 4; ++n) {
        Eigen::VectorXd r = H * sol.vectors().col(n) - sol.values()[n] * sol.vectors().col(n);
        CHECK(r.norm() < 1e-10 * (1 + std::abs(sol.values()[n])));
    }

    // the Bloch wave is k-pseudoperiodic
    std::vector<double> x{0.3, 1.3};
    auto phi = bloch_wave_eval(sol, 2, x);
    CHECK(std::abs(phi[1] - std::exp(std::complex<double>(0, sol.k())) * phi[0]) < 1e-12);
}

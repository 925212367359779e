#include <doctest.h>

#include <cmath>
#include <numbers>

#include "diracsol/cell_function.hpp"
#include "diracsol/errors.hpp"
#include "diracsol/multiscale.hpp"

using namespace diracsol;
using std::numbers::pi;
using cplx = std::complex<double>;

namespace {

struct Fixture
{
    PeriodicPotential V{{{2, 20.0}}, ParityClass::EvenIndex};
    PeriodicPotential W{{{1, 1.0}}, ParityClass::OddIndex};
    DiracPointData d = analyse_dirac_point(V, W, FourierCutoff{64}, 1);
    SpinorProfile prof = integrate_homoclinic(NLDParams::from_dirac(d, 0.0));
};

Fixture const& fixture()
{
    static Fixture f;
    return f;
}

CellFunction sparse(int M, std::initializer_list<std::pair<int, cplx>> entries)
{
    auto f = CellFunction::zero(FourierCutoff{M});
    Eigen::VectorXcd c = f.coeffs();
    for (auto const& [m, v] : entries) {
        c(m + M) = v;
    }
    return CellFunction(c);
}

} // namespace

TEST_CASE("cell function algebra")
{
    auto f = sparse(8, {{0, 1.0}, {1, cplx(0.5, -0.2)}, {-2, 0.3}});
    auto g = sparse(8, {{-1, 2.0}, {2, cplx(0, 1)}});
    auto h = sparse(8, {{0, cplx(1, 1)}, {-1, 0.1}});
    auto p = cubic_product(f, g, h);
    for (double x : {0.0, 0.21, 0.77, 1.4}) {
        CHECK(std::abs(p(x) - f(x) * g(x) * std::conj(h(x))) < 1e-13);
        CHECK(std::abs(f.reflected()(x) - f(-x)) < 1e-14);
        CHECK(std::abs(f.conjugated()(x) - std::conj(f(x))) < 1e-14);
        double e = 1e-5;
        CHECK(std::abs(f.derivative()(x) - (f(x + e) - f(x - e)) / (2 * e)) < 1e-7);
    }
    // antiperiodic under a unit shift
    CHECK(std::abs(f(1.3) + f(0.3)) < 1e-13);
    CHECK(std::abs(inner(f, f) - f.norm() * f.norm()) < 1e-14);
    auto s = 2.0 * f - f;
    CHECK((s.coeffs() - f.coeffs()).norm() == 0.0);

    CellEvaluator ev({f, g});
    std::array<cplx, 2> out;
    ev.evaluate(0.33, out);
    CHECK(std::abs(out[0] - f(0.33)) < 1e-14);
    CHECK(std::abs(out[1] - g(0.33)) < 1e-14);
}

TEST_CASE("envelope factors")
{
    auto y = forcing_y_factors(2.0, 0.0, 0.0, 4.0);
    CHECK(y[0] == cplx(0, 2)); // slow derivative of (u + iv)/2
    CHECK(y[1] == cplx(0, -2));
    CHECK(y[2] == cplx(1, 0));
    CHECK(y[4] == cplx(1, 0));
}

TEST_CASE("solvability and corrector")
{
    auto const& f = fixture();
    auto G        = build_G1(f.d, f.W, f.prof);
    CHECK(G.y_grid.size() == f.prof.size());
    auto sv = solvability_check(G, f.d);
    CHECK(sv.relative < 1e-6);
    CHECK(sv.max_forcing_norm > 0);

    auto U1 = solve_U1(G, f.d, f.V);
    CHECK(U1.max_kernel_overlap < 1e-10);
    CHECK(U1.max_residual < 1e-10);
    CHECK(std::abs(U1.nearest_other_eigenvalue - f.d.mu_star) > 1);

    // perturbing the envelope off the orbit breaks solvability
    SpinorProfile bent = f.prof;
    for (auto& u : bent.u) {
        u *= 1.001;
    }
    auto sb = solvability_check(build_G1(f.d, f.W, bent), f.d);
    CHECK(sb.relative > 1e-5);
}

TEST_CASE("leading-order field")
{
    auto const& f = fixture();
    double delta  = 0.05;
    std::vector<double> x{0.0, 3.25, -17.5};
    auto u0 = build_U0(f.d, f.prof, delta, x);
    for (std::size_t i = 0; i < x.size(); ++i) {
        auto s = f.prof.at(delta * x[i]);
        CHECK(u0[i] == doctest::Approx((cplx(s.u, s.v) * f.d.g1(x[i])).real()).epsilon(1e-12));
    }
}

TEST_CASE("two-scale field bounds")
{
    auto const& f = fixture();
    CHECK_THROWS_AS(assemble_udelta(f.d, f.prof, nullptr, 0.0, 10, 1.0 / 64), ValidationError);
    CHECK_THROWS_AS(assemble_udelta(f.d, f.prof, nullptr, 0.1, 2 * f.prof.y_max() / 0.1, 1.0 / 64),
                    ValidationError);
    auto L = ansatz_half_width(f.prof.params, f.d, 0.1);
    CHECK(L == std::floor(L));
    CHECK(0.1 * L < f.prof.y_max());

    auto field = assemble_udelta(f.d, f.prof, nullptr, 0.1, 40, 1.0 / 64);
    CHECK(field.samples.size() == 2 * 40 * 64 + 1);
    CHECK(field.u1.empty());
    CHECK(field.x(0) == -40.0);
    CHECK(field.samples[field.n] == doctest::Approx(std::sqrt(0.1) * field.u0[field.n]));
}

TEST_CASE("log-log fit")
{
    std::vector<double> d{0.1, 0.05, 0.025};
    std::vector<double> v;
    for (double x : d) {
        v.push_back(3 * x * x);
    }
    CHECK(fitted_order(d, v) == doctest::Approx(2.0).epsilon(1e-12));
}

#include <doctest.h>

#include <cmath>

#include "diracsol/errors.hpp"
#include "diracsol/nld.hpp"
#include "oracles.hpp"

using namespace diracsol;

namespace {

NLDParams default_params(double mu_fraction = 0)
{
    return {oracle::c_sharp, oracle::theta_sharp, mu_fraction * oracle::theta_sharp, oracle::beta1, oracle::beta2};
}

} // namespace

TEST_CASE("parameter validation")
{
    CHECK_NOTHROW(default_params().validate());
    auto p = default_params();
    p.mu_sharp = oracle::theta_sharp;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = default_params();
    p.beta2 = -1.5 * p.beta1;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = default_params();
    p.c_sharp = 0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
}

TEST_CASE("coefficients and equilibria")
{
    NLDParams p{1, 1, 0, 1, 0};
    CHECK(p.a() == 0.75);
    CHECK(p.b() == 0.75);
    CHECK(p.decay_rate() == 1.0);
    auto ic = initial_condition(p);
    CHECK(hamiltonian(p, ic[0], ic[1]) == doctest::Approx(0).epsilon(1e-15));
    for (auto const& e : equilibria(p)) {
        auto f = vector_field(p, e[0], e[1]);
        CHECK(std::abs(f[0]) + std::abs(f[1]) < 1e-14);
    }
}

TEST_CASE("homoclinic orbit matches the closed form")
{
    for (double frac : {0.0, 0.3, 0.6}) {
        auto p    = default_params(frac);
        auto prof = integrate_homoclinic(p);
        double err{0}, peak{0};
        for (std::size_t i = 0; i < prof.size(); i += 7) {
            auto o = oracle::nld_orbit(p.c_sharp, p.theta_sharp, p.mu_sharp, p.a(), p.b(), prof.y[i]);
            err    = std::max({err, std::abs(prof.u[i] - o.u), std::abs(prof.v[i] - o.v)});
            peak   = std::max(peak, std::abs(o.u));
        }
        CHECK(err < 1e-9 * peak);
        CHECK(prof.h_drift_max < 1e-9);
        CHECK(prof.angle_monotone);
        CHECK(prof.decay_rate_fit == doctest::Approx(p.decay_rate()).epsilon(0.02));
        CHECK(prof.y_max() == doctest::Approx(30 * p.decay_length()).epsilon(1e-9));

        // u even, v odd
        std::size_t n = prof.size();
        for (std::size_t i = 0; i < n; i += 13) {
            CHECK(prof.u[i] == prof.u[n - 1 - i]);
            CHECK(prof.v[i] == -prof.v[n - 1 - i]);
        }
    }
}

TEST_CASE("negative coupling gives the swapped symmetry")
{
    NLDParams p{oracle::c_sharp, -oracle::theta_sharp, 0.1, oracle::beta1, oracle::beta2};
    auto prof = integrate_homoclinic(p);
    std::size_t n = prof.size(), mid = n / 2;
    CHECK(prof.u[mid] == 0.0);
    CHECK(prof.v[mid] > 0);
    for (std::size_t i = 0; i < n; i += 13) {
        CHECK(prof.u[i] == -prof.u[n - 1 - i]);
        CHECK(prof.v[i] == prof.v[n - 1 - i]);
    }
    CHECK(prof.h_drift_max < 1e-9);
    CHECK(prof.decay_rate_fit == doctest::Approx(p.decay_rate()).epsilon(0.02));
}

TEST_CASE("interpolation and resampling")
{
    auto p    = default_params(0.3);
    auto prof = integrate_homoclinic(p);
    double y  = 0.37 * p.decay_length();
    auto s    = prof.at(y);
    auto o    = oracle::nld_orbit(p.c_sharp, p.theta_sharp, p.mu_sharp, p.a(), p.b(), y);
    CHECK(std::abs(s.u - o.u) < 1e-8);
    CHECK(std::abs(s.v - o.v) < 1e-8);
    auto f = vector_field(p, s.u, s.v);
    CHECK(s.du == doctest::Approx(f[0]));
    CHECK_THROWS_AS(prof.at(1.01 * prof.y_max()), ValidationError);

    auto r = prof.resampled(5 * p.decay_length(), 101);
    CHECK(r.size() == 101);
    CHECK(r.y.front() == doctest::Approx(-5 * p.decay_length()));
}

TEST_CASE("branch flip")
{
    auto p = default_params();
    HomoclinicOptions o;
    o.flip_branch = true;
    auto a = integrate_homoclinic(p);
    auto b = integrate_homoclinic(p, o);
    CHECK(b.u[b.size() / 2] == -a.u[a.size() / 2]);
}

TEST_CASE("domain too short is rejected")
{
    HomoclinicOptions o;
    o.y_max = 5 * default_params().decay_length();
    CHECK_THROWS_AS(integrate_homoclinic(default_params(), o), ValidationError);
}

TEST_CASE("linearization kernel")
{
    auto p    = default_params();
    auto prof = integrate_homoclinic(p);
    auto d    = profile_derivative(prof);
    auto img  = d0_apply(p, prof, d);
    double num{0}, den{0};
    for (std::size_t i = 0; i < d.size(); ++i) {
        num += std::norm(img[i][0]) + std::norm(img[i][1]);
        den += std::norm(d[i][0]) + std::norm(d[i][1]);
    }
    CHECK(std::sqrt(num / den) < 1e-6);

    auto k = kernel_check_on_Y(p, prof);
    CHECK(k.points == 401);
    CHECK(k.sigma_min_unrestricted < 1e-2 * k.operator_norm);
    CHECK(k.sigma_min_restricted > 10 * k.sigma_min_unrestricted);
}

#include "diracsol/nld.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <boost/numeric/odeint.hpp>
#include <Eigen/Dense>

#include "diracsol/errors.hpp"

namespace diracsol {

namespace {

namespace odeint = boost::numeric::odeint;

using PolarState = std::array<double, 2>;

/// Angle phi and log-radius rho of (u, v) on the zero-energy level. There
/// r^2 q(phi) = 2 (theta cos 2phi - mu), which turns the angle equation into
/// c phi' = mu - theta cos 2phi. That form keeps the approach to the saddle at
/// the origin stable; rho keeps its own equation so energy drift stays visible.
struct LevelSetFlow
{
    NLDParams p;
    double sign{1};

    void operator()(PolarState const& s, PolarState& ds, double) const
    {
        double c2 = std::cos(2 * s[0]);
        double s2 = std::sin(2 * s[0]);
        double r2 = std::exp(2 * s[1]);
        ds[0]     = sign * (p.mu_sharp - p.theta_sharp * c2) / p.c_sharp;
        ds[1]     = sign * s2 * (p.theta_sharp + 0.5 * (p.a() - p.b()) * r2 * c2) / p.c_sharp;
    }
};

std::vector<PolarState> integrate_level_set(NLDParams const& p, PolarState start, double dy, int steps, double sign,
                                            double tol)
{
    std::vector<double> times(steps + 1);
    for (int k = 0; k <= steps; ++k) {
        times[k] = k * dy;
    }
    std::vector<PolarState> out;
    out.reserve(steps + 1);
    auto stepper = odeint::make_dense_output(tol, tol, odeint::runge_kutta_dopri5<PolarState>());
    odeint::integrate_times(stepper, LevelSetFlow{p, sign}, start, times.begin(), times.end(), 0.1 * dy,
                            [&](PolarState const& s, double) { out.push_back(s); });
    return out;
}

/// Slope of the least-squares line through (x_i, f_i).
double fit_slope(std::vector<double> const& x, std::vector<double> const& f)
{
    double n = static_cast<double>(x.size());
    double mx{0}, mf{0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        mf += f[i];
    }
    mx /= n;
    mf /= n;
    double sxx{0}, sxf{0};
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxf += (x[i] - mx) * (f[i] - mf);
    }
    return sxf / sxx;
}

/// Antisymmetric 8th-order first-derivative stencil with zero padding.
std::complex<double> fd_derivative(std::vector<std::complex<double>> const& f, std::size_t j, double h)
{
    auto get = [&](long i) -> std::complex<double> {
        return (i < 0 || i >= static_cast<long>(f.size())) ? 0.0 : f[i];
    };
    static constexpr double w[4] = {4.0 / 5, -1.0 / 5, 4.0 / 105, -1.0 / 280};
    long i = static_cast<long>(j);
    std::complex<double> s{0};
    for (long k = 1; k <= 4; ++k) {
        s += w[k - 1] * (get(i + k) - get(i - k));
    }
    return s / h;
}

} // namespace

double NLDParams::decay_rate() const
{
    return std::sqrt(theta_sharp * theta_sharp - mu_sharp * mu_sharp) / std::abs(c_sharp);
}

void NLDParams::validate() const
{
    std::ostringstream s;
    if (!std::isfinite(c_sharp) || c_sharp == 0) {
        s << "slope coefficient c must be finite and nonzero";
    } else if (!std::isfinite(theta_sharp) || theta_sharp == 0) {
        s << "coupling coefficient theta must be finite and nonzero";
    } else if (!std::isfinite(mu_sharp) || !(std::abs(mu_sharp) < std::abs(theta_sharp))) {
        s << "frequency offset mu = " << mu_sharp << " must satisfy |mu| < |theta| = " << std::abs(theta_sharp);
    } else if (!std::isfinite(beta1) || !std::isfinite(beta2) || !(beta1 > 0) || beta1 < std::abs(beta2)) {
        s << "quartic coefficients must satisfy beta1 >= |beta2| and beta1 > 0 (got " << beta1 << ", " << beta2
          << ")";
    } else {
        return;
    }
    throw ValidationError(s.str());
}

NLDParams NLDParams::from_dirac(DiracPointData const& d, double mu_sharp)
{
    return {d.c_sharp, d.theta_sharp, mu_sharp, d.beta1, d.beta2};
}

double hamiltonian(NLDParams const& p, double u, double v)
{
    double u2 = u * u, v2 = v * v;
    return 0.25 * p.b() * (u2 * u2 + v2 * v2) + 0.5 * p.a() * u2 * v2 + 0.5 * p.mu_sharp * (u2 + v2) +
           0.5 * p.theta_sharp * (v2 - u2);
}

std::array<double, 2> vector_field(NLDParams const& p, double u, double v)
{
    double a = p.a(), b = p.b();
    double du = (p.theta_sharp * v + p.mu_sharp * v + a * u * u * v + b * v * v * v) / p.c_sharp;
    double dv = (p.theta_sharp * u - p.mu_sharp * u - b * u * u * u - a * v * v * u) / p.c_sharp;
    return {du, dv};
}

std::array<double, 2> initial_condition(NLDParams const& p)
{
    p.validate();
    if (p.theta_sharp > 0) {
        return {std::sqrt(2 * (p.theta_sharp - p.mu_sharp) / p.b()), 0.0};
    }
    return {0.0, std::sqrt(2 * (-p.theta_sharp - p.mu_sharp) / p.b())};
}

std::vector<std::array<double, 2>> equilibria(NLDParams const& p)
{
    p.validate();
    std::vector<std::array<double, 2>> out{{0.0, 0.0}};
    if (p.theta_sharp > 0) {
        double r = std::sqrt((p.theta_sharp - p.mu_sharp) / p.b());
        out.push_back({r, 0.0});
        out.push_back({-r, 0.0});
    } else {
        double r = std::sqrt((-p.theta_sharp - p.mu_sharp) / p.b());
        out.push_back({0.0, r});
        out.push_back({0.0, -r});
    }
    return out;
}

SpinorProfile::Sample SpinorProfile::at(double yq) const
{
    double Y = y_max();
    if (std::abs(yq) > Y * (1 + 1e-12)) {
        std::ostringstream s;
        s << "slow coordinate " << yq << " lies outside the profile range [-" << Y << ", " << Y
          << "]; increase y_max";
        throw ValidationError(s.str());
    }
    double h = dy();
    auto i   = static_cast<std::size_t>(std::clamp(std::floor((yq - y.front()) / h), 0.0, double(size() - 2)));
    double t = (yq - y[i]) / h;
    double t2 = t * t, t3 = t2 * t;
    double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t, h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    double uq  = h00 * u[i] + h10 * h * du[i] + h01 * u[i + 1] + h11 * h * du[i + 1];
    double vq  = h00 * v[i] + h10 * h * dv[i] + h01 * v[i + 1] + h11 * h * dv[i + 1];
    auto d     = vector_field(params, uq, vq);
    return {uq, vq, d[0], d[1]};
}

SpinorProfile SpinorProfile::resampled(double half_width, int n) const
{
    if (n < 5 || n % 2 == 0) {
        throw ValidationError("resampling needs an odd number of points, at least 5");
    }
    SpinorProfile out = *this;
    out.y.resize(n);
    out.u.resize(n);
    out.v.resize(n);
    out.du.resize(n);
    out.dv.resize(n);
    out.hamiltonian_trace.resize(n);
    int c = n / 2;
    for (int i = 0; i < n; ++i) {
        out.y[i] = half_width * (i - c) / c;
    }
    for (int i = 0; i < n; ++i) {
        auto s                   = at(out.y[i]);
        out.u[i]                 = s.u;
        out.v[i]                 = s.v;
        out.du[i]                = s.du;
        out.dv[i]                = s.dv;
        out.hamiltonian_trace[i] = hamiltonian(params, s.u, s.v);
    }
    return out;
}

SpinorProfile integrate_homoclinic(NLDParams const& params, HomoclinicOptions const& opts)
{
    params.validate();
    double dl    = params.decay_length();
    double y_max = opts.y_max > 0 ? opts.y_max : 30 * dl;
    if (y_max < 10 * dl) {
        std::ostringstream s;
        s << "y_max = " << y_max << " covers fewer than 10 decay lengths (" << dl << " each)";
        throw ValidationError(s.str());
    }
    if (opts.samples_per_decay_length < 8) {
        throw ValidationError("at least 8 samples per decay length are needed");
    }
    int K     = static_cast<int>(std::ceil(y_max / dl * opts.samples_per_decay_length));
    double dy = y_max / K;

    auto ic    = initial_condition(params);
    double r0  = std::hypot(ic[0], ic[1]);
    PolarState start{params.theta_sharp > 0 ? 0.0 : std::numbers::pi / 2, std::log(r0)};
    auto fwd = integrate_level_set(params, start, dy, K, 1.0, opts.tol);
    auto bwd = integrate_level_set(params, start, dy, K, -1.0, opts.tol);
    if (static_cast<int>(fwd.size()) != K + 1 || static_cast<int>(bwd.size()) != K + 1) {
        throw NumericalError("homoclinic integration stopped early");
    }

    // mirror map: (u, v)(-y) = (u, -v)(y) for theta > 0, (-u, v)(y) for theta < 0
    double mirror_sign = params.theta_sharp > 0 ? 1.0 : -1.0;
    double sgn     = opts.flip_branch ? -1.0 : 1.0;

    SpinorProfile p;
    p.params = params;
    int n    = 2 * K + 1;
    p.y.resize(n);
    p.u.resize(n);
    p.v.resize(n);
    for (int k = 0; k <= K; ++k) {
        double r  = std::exp(fwd[k][1]);
        double uf = sgn * r * std::cos(fwd[k][0]);
        double vf = sgn * r * std::sin(fwd[k][0]);
        p.y[K + k] = k * dy;
        p.y[K - k] = -k * dy;
        p.u[K + k] = uf;
        p.v[K + k] = vf;
        p.u[K - k] = mirror_sign * uf;
        p.v[K - k] = -mirror_sign * vf;

        double rb = std::exp(bwd[k][1]);
        double ub = sgn * rb * std::cos(bwd[k][0]);
        double vb = sgn * rb * std::sin(bwd[k][0]);
        p.parity_defect = std::max({p.parity_defect, std::abs(ub - mirror_sign * uf), std::abs(vb + mirror_sign * vf)});
    }
    // the mirrored samples at y = 0 must agree with the forward ones
    p.u[K] = sgn * ic[0];
    p.v[K] = sgn * ic[1];

    p.du.resize(n);
    p.dv.resize(n);
    p.hamiltonian_trace.resize(n);
    for (int i = 0; i < n; ++i) {
        auto d                 = vector_field(params, p.u[i], p.v[i]);
        p.du[i]                = d[0];
        p.dv[i]                = d[1];
        p.hamiltonian_trace[i] = hamiltonian(params, p.u[i], p.v[i]);
        p.h_drift_max          = std::max(p.h_drift_max, std::abs(p.hamiltonian_trace[i]));
    }

    double h_scale = std::pow(std::abs(params.theta_sharp) - params.mu_sharp, 2) / (4 * params.b());
    if (p.h_drift_max > 100 * opts.tol * (1 + h_scale)) {
        std::ostringstream s;
        s << "trajectory left the zero-energy level (max |H| = " << p.h_drift_max << "); reduce the step tolerance";
        throw NumericalError(s.str());
    }
    double r_end = std::hypot(p.u.back(), p.v.back());
    if (r_end > 1e-6 * r0) {
        std::ostringstream s;
        s << "profile has not decayed at y_max = " << y_max << " (|(u,v)| = " << r_end << "); increase y_max";
        throw ValidationError(s.str());
    }

    std::vector<double> ty, tl;
    for (int i = K; i < n; ++i) {
        if (p.y[i] >= 0.5 * y_max && p.y[i] <= 0.9 * y_max) {
            ty.push_back(p.y[i]);
            tl.push_back(std::log(std::hypot(p.u[i], p.v[i])));
        }
    }
    p.decay_rate_fit = -fit_slope(ty, tl);

    // the phase of the forward half must move one way; the mirrored half
    // then does too. Steps that stall at the asymptotic angle are allowed.
    double total     = fwd[K][0] - fwd[0][0];
    p.angle_monotone = total != 0;
    for (int k = 1; k <= K; ++k) {
        if ((fwd[k][0] - fwd[k - 1][0]) * total < -1e-12 * std::abs(total)) {
            p.angle_monotone = false;
        }
    }
    return p;
}

SpinorSamples d0_apply(NLDParams const& params, SpinorProfile const& profile, SpinorSamples const& eta)
{
    if (eta.size() != profile.size()) {
        throw ValidationError("spinor samples do not match the profile grid");
    }
    std::size_t n = eta.size();
    std::vector<std::complex<double>> em(n), ep(n);
    for (std::size_t i = 0; i < n; ++i) {
        em[i] = eta[i][0];
        ep[i] = eta[i][1];
    }
    double h = profile.dy();
    double c = params.c_sharp, th = params.theta_sharp, mu = params.mu_sharp;
    double b1 = params.beta1, b2 = params.beta2;
    const std::complex<double> I(0, 1);
    SpinorSamples out(n);
    for (std::size_t i = 0; i < n; ++i) {
        auto pm  = profile.psi_minus(i);
        auto pp  = profile.psi_plus(i);
        double P = std::norm(pm);
        auto Qm  = 3.0 * (b1 * pm * pm + b2 * pp * pp);
        auto Qp  = 3.0 * (b1 * pp * pp + b2 * pm * pm);
        out[i][0] = I * c * fd_derivative(em, i, h) + th * ep[i] - mu * em[i] - (6 * b1 * P * em[i] + Qm * ep[i]);
        out[i][1] = -I * c * fd_derivative(ep, i, h) + th * em[i] - mu * ep[i] - (Qp * em[i] + 6 * b1 * P * ep[i]);
    }
    return out;
}

SpinorSamples profile_derivative(SpinorProfile const& profile)
{
    SpinorSamples d(profile.size());
    for (std::size_t i = 0; i < profile.size(); ++i) {
        std::complex<double> m(0.5 * profile.du[i], 0.5 * profile.dv[i]);
        d[i] = {m, std::conj(m)};
    }
    return d;
}

KernelReport kernel_check_on_Y(NLDParams const& params, SpinorProfile const& profile, int points, double half_width)
{
    double W = half_width > 0 ? half_width : 12 * params.decay_length();
    auto pr  = profile.resampled(W, points);
    int n    = points;
    double h = pr.dy();

    // With zeta_minus = (alpha + i beta)/2 and zeta_plus = conj(zeta_minus) the
    // operator becomes real symmetric on (alpha, beta).
    double c = params.c_sharp, th = params.theta_sharp, mu = params.mu_sharp;
    double b1 = params.beta1, b2 = params.beta2;
    Eigen::MatrixXd T = Eigen::MatrixXd::Zero(2 * n, 2 * n);
    const double stencil[5] = {1, -8, 0, 8, -1};
    for (int i = 0; i < n; ++i) {
        double u = pr.u[i], v = pr.v[i];
        double P  = 0.25 * (u * u + v * v);
        double Qr = 0.75 * (b1 + b2) * (u * u - v * v);
        double Qi = 1.5 * (b1 - b2) * u * v;
        T(i, i)         = th - mu - 6 * b1 * P - Qr;
        T(n + i, n + i) = -th - mu - 6 * b1 * P + Qr;
        T(i, n + i)     = -Qi;
        T(n + i, i)     = -Qi;
        for (int s = -2; s <= 2; ++s) {
            int j = i + s;
            if (s == 0 || j < 0 || j >= n) {
                continue;
            }
            double d = stencil[s + 2] / (12 * h);
            T(i, n + j) += -c * d;
            T(n + i, j) += c * d;
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> full(T, Eigen::EigenvaluesOnly);
    KernelReport r;
    r.points                 = n;
    r.half_width             = W;
    r.sigma_min_unrestricted = full.eigenvalues().cwiseAbs().minCoeff();
    r.operator_norm          = full.eigenvalues().cwiseAbs().maxCoeff();

    // mirror-symmetric subspace: alpha even and beta odd for theta > 0, swapped otherwise
    int mid = n / 2;
    Eigen::MatrixXd even = Eigen::MatrixXd::Zero(n, mid + 1);
    Eigen::MatrixXd odd  = Eigen::MatrixXd::Zero(n, mid);
    even(mid, 0)         = 1;
    for (int k = 1; k <= mid; ++k) {
        even(mid + k, k)    = std::sqrt(0.5);
        even(mid - k, k)    = std::sqrt(0.5);
        odd(mid + k, k - 1) = std::sqrt(0.5);
        odd(mid - k, k - 1) = -std::sqrt(0.5);
    }
    Eigen::MatrixXd const& Ba = params.theta_sharp > 0 ? even : odd;
    Eigen::MatrixXd const& Bb = params.theta_sharp > 0 ? odd : even;
    Eigen::MatrixXd B         = Eigen::MatrixXd::Zero(2 * n, Ba.cols() + Bb.cols());
    B.topLeftCorner(n, Ba.cols())      = Ba;
    B.bottomRightCorner(n, Bb.cols())  = Bb;
    Eigen::MatrixXd TY = B.transpose() * T * B;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> restricted(TY, Eigen::EigenvaluesOnly);
    r.sigma_min_restricted = restricted.eigenvalues().cwiseAbs().minCoeff();
    return r;
}

} // namespace diracsol

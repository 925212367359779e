// End-to-end acceptance suite. Prints one PASS/FAIL line per criterion and
// exits nonzero if any fails. argv[1] is the command-line driver, used for the
// determinism check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include "diracsol/bloch.hpp"
#include "diracsol/dirac_point.hpp"
#include "diracsol/multiscale.hpp"
#include "diracsol/newton.hpp"
#include "diracsol/nld.hpp"

using namespace diracsol;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

struct Outcome
{
    bool pass{true};
    std::ostringstream detail;

    void require(bool ok, std::string const& what)
    {
        pass = pass && ok;
        detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [x]");
    }
};

std::string sci(double x)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3e", x);
    return buf;
}

int failures = 0;

void criterion(int id, std::string const& title, double budget_s, std::function<void(Outcome&)> const& body)
{
    Outcome o;
    auto t0 = std::chrono::steady_clock::now();
    try {
        body(o);
    } catch (std::exception const& e) {
        o.require(false, std::string("exception: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    o.require(secs <= budget_s, "time " + sci(secs) + " s of " + sci(budget_s));
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", id, title.c_str(), o.detail.str().c_str());
    std::fflush(stdout);
    failures += o.pass ? 0 : 1;
}

PeriodicPotential const V_default({{2, 20.0}}, ParityClass::EvenIndex);
PeriodicPotential const W_default({{1, 1.0}}, ParityClass::OddIndex);
FourierCutoff const cut{64};

/// Shared between the slow criteria so the Dirac data and profile are built once.
struct Pipeline
{
    DiracPointData d;
    NLDParams params;
    std::vector<double> deltas{0.1, 0.05, 0.025};
    std::vector<double> L;
    SpinorProfile prof;
    std::optional<CorrectorSolution> U1;
};

Pipeline& pipeline()
{
    static Pipeline p = [] {
        Pipeline q;
        q.d      = analyse_dirac_point(V_default, W_default, cut, 1);
        q.params = NLDParams::from_dirac(q.d, 0.0);
        double y{0};
        for (double delta : q.deltas) {
            q.L.push_back(ansatz_half_width(q.params, q.d, delta));
            y = std::max(y, delta * q.L.back());
        }
        HomoclinicOptions o;
        o.y_max = std::max(30 * q.params.decay_length(), 1.01 * y);
        q.prof  = integrate_homoclinic(q.params, o);
        return q;
    }();
    return p;
}

std::string slurp(fs::path const& p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream s;
    s << in.rdbuf();
    return s.str();
}

} // namespace

int main(int argc, char** argv)
{
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path to diracsol>\n");
        return 2;
    }
    std::string cli = argv[1];

    criterion(1, "free-operator closed forms", 1.0, [](Outcome& o) {
        auto d = analyse_dirac_point(PeriodicPotential{}, W_default, cut, 1);
        o.require(std::abs(d.mu_star - pi * pi) < 1e-10, "mu* - pi^2 = " + sci(d.mu_star - pi * pi));
        o.require(std::abs(std::abs(d.c_sharp) - 2 * pi) < 1e-8, "|c| - 2pi = " + sci(std::abs(d.c_sharp) - 2 * pi));
        double g2 = c_sharp_from_g2(d);
        o.require(std::abs(g2 - d.c_sharp) < 1e-12, "g1/g2 forms differ by " + sci(g2 - d.c_sharp));
        o.require(std::abs(d.theta_sharp - 0.5) < 1e-10, "theta - 0.5 = " + sci(d.theta_sharp - 0.5));
        o.require(std::abs(d.beta1 - 1) < 1e-10 && std::abs(d.beta2) < 1e-10,
                  "beta1 - 1 = " + sci(d.beta1 - 1) + ", beta2 = " + sci(d.beta2));
    });

    criterion(2, "Dirac-point certification", 5.0, [](Outcome& o) {
        auto at_pi = solve_bands_at_k(V_default, pi, cut);
        auto d     = analyse_dirac_point(V_default, W_default, cut, 1);
        int n      = d.band_pair.first - 1;
        double gap = std::abs(at_pi.values()[n + 1] - at_pi.values()[n]);
        o.require(gap < 1e-8, "degeneracy " + sci(gap));

        auto H = assemble_fb_matrix(V_default, pi, cut);
        double cross{0};
        for (int i = 0; i < cut.size(); ++i) {
            for (int j = 0; j < cut.size(); ++j) {
                if ((cut.index(i) - cut.index(j)) % 2 != 0) {
                    cross = std::max(cross, std::abs(H(i, j)));
                }
            }
        }
        o.require(cross == 0.0, "cross-parity entries " + sci(cross));

        auto sl    = band_slope_oracle(V_default, d);
        double c   = std::abs(d.c_sharp);
        double rel = std::max(std::abs(std::abs(sl.slope_minus) - c), std::abs(std::abs(sl.slope_plus) - c)) / c;
        o.require(rel <= 1e-4, "slope mismatch " + sci(rel));

        // beta2 computed independently by quadrature on a fine cell grid
        int N = 4096;
        std::complex<double> b2{0};
        for (int j = 0; j < N; ++j) {
            double x = static_cast<double>(j) / N;
            auto p1  = d.g1(x);
            auto p2  = d.g2(x);
            b2 += std::conj(p2) * std::conj(p2) * p1 * p1;
        }
        b2 /= N;
        o.require(std::abs(b2.imag()) <= 1e-10, "Im beta2 " + sci(b2.imag()));
        o.require(std::abs(b2.real() - d.beta2) <= 1e-10, "beta2 quadrature gap " + sci(b2.real() - d.beta2));
        o.require(std::abs(d.beta2) <= d.beta1, "|beta2| <= beta1");
    });

    criterion(3, "gap opening", 30.0, [](Outcome& o) {
        auto d  = analyse_dirac_point(V_default, W_default, cut, 1);
        auto kg = gap_k_grid();
        for (double delta : {0.05, 0.1}) {
            auto g      = verify_gap_opening(V_default, W_default, d, delta, 0.9, kg);
            double pred = delta * std::abs(d.theta_sharp);
            double rel  = std::abs(g.half_gap_at_pi - pred) / pred;
            o.require(g.ok(), "delta " + sci(delta) + ": " + std::to_string(g.violations.size()) + " violations");
            o.require(rel <= 0.1, "half-gap error " + sci(rel));
        }
    });

    criterion(4, "nonlinear Dirac homoclinic orbit", 3.0, [](Outcome& o) {
        auto d = analyse_dirac_point(V_default, W_default, cut, 1);
        for (double frac : {0.0, 0.3, 0.6}) {
            auto t0   = std::chrono::steady_clock::now();
            auto p    = NLDParams::from_dirac(d, frac * std::abs(d.theta_sharp));
            auto prof = integrate_homoclinic(p);
            double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

            double hmax{0}, par{0};
            std::size_t n = prof.size();
            for (std::size_t i = 0; i < n; ++i) {
                hmax = std::max(hmax, std::abs(hamiltonian(p, prof.u[i], prof.v[i])));
                par  = std::max({par, std::abs(prof.u[i] - prof.u[n - 1 - i]), std::abs(prof.v[i] + prof.v[n - 1 - i])});
            }
            double rate = std::abs(prof.decay_rate_fit - p.decay_rate()) / p.decay_rate();

            auto dpsi = profile_derivative(prof);
            auto img  = d0_apply(p, prof, dpsi);
            double num{0}, den{0};
            for (std::size_t i = 0; i < n; ++i) {
                num += std::norm(img[i][0]) + std::norm(img[i][1]);
                den += std::norm(dpsi[i][0]) + std::norm(dpsi[i][1]);
            }
            double ratio = std::sqrt(num / den);

            std::string tag = "mu=" + std::to_string(frac).substr(0, 3) + "|theta| ";
            o.require(prof.h_drift_max <= 1e-9, tag + "drift " + sci(prof.h_drift_max));
            o.require(hmax <= 1e-9, tag + "|H| " + sci(hmax));
            o.require(par <= 1e-9 && prof.parity_defect <= 1e-9,
                      tag + "parity " + sci(par) + "/" + sci(prof.parity_defect));
            o.require(rate <= 0.02, tag + "decay error " + sci(rate));
            o.require(ratio <= 1e-6, tag + "|D0 Psi'|/|Psi'| " + sci(ratio));
            o.require(secs < 1.0, tag + "run " + sci(secs) + " s");
        }
    });

    criterion(5, "symmetric-subspace invertibility", 10.0, [](Outcome& o) {
        auto d    = analyse_dirac_point(V_default, W_default, cut, 1);
        auto p    = NLDParams::from_dirac(d, 0.0);
        auto prof = integrate_homoclinic(p);
        auto k    = kernel_check_on_Y(p, prof);
        o.require(k.sigma_min_unrestricted < 1e-2 * k.operator_norm,
                  "unrestricted sigma_min " + sci(k.sigma_min_unrestricted) + " (norm " + sci(k.operator_norm) + ")");
        o.require(k.sigma_min_restricted > 10 * k.sigma_min_unrestricted,
                  "restricted sigma_min " + sci(k.sigma_min_restricted));
    });

    criterion(6, "solvability of the first-order forcing", 5.0, [](Outcome& o) {
        auto& P = pipeline();
        auto G  = build_G1(P.d, W_default, P.prof);
        auto sv = solvability_check(G, P.d);
        P.U1    = solve_U1(G, P.d, V_default);
        o.require(sv.relative <= 1e-6, "relative projection " + sci(sv.relative));
        o.require(P.U1->max_kernel_overlap <= 1e-10, "corrector overlap " + sci(P.U1->max_kernel_overlap));
    });

    criterion(7, "two-scale residual scaling", 300.0, [](Outcome& o) {
        auto& P = pipeline();
        if (!P.U1) {
            P.U1 = solve_U1(build_G1(P.d, W_default, P.prof), P.d, V_default);
        }
        std::vector<double> res;
        for (std::size_t i = 0; i < P.deltas.size(); ++i) {
            auto f = assemble_udelta(P.d, P.prof, &*P.U1, P.deltas[i], P.L[i], 1.0 / 256);
            res.push_back(residual_norm(f, V_default, W_default));
        }
        double order = fitted_order(P.deltas, res);
        o.require(order >= 0.8, "fitted order " + sci(order) + " from residuals " + sci(res[0]) + ", " +
                                    sci(res[1]) + ", " + sci(res[2]));
    });

    criterion(8, "Newton soliton and error scaling", 600.0, [](Outcome& o) {
        auto& P = pipeline();
        std::vector<double> h2;
        double h = 1.0 / 128;
        for (std::size_t i = 0; i < P.deltas.size(); ++i) {
            double delta = P.deltas[i];
            auto op      = discretize_operator(V_default, W_default, delta, P.d.mu_star, h, P.L[i],
                                               parity_for(P.d.theta_sharp));
            auto u0      = build_U0(P.d, P.prof, delta, op.grid.points());
            for (auto& v : u0) {
                v *= std::sqrt(delta);
            }
            NewtonConfig nc;
            nc.parity         = op.grid.parity;
            nc.reference_norm = op.norm(u0);
            auto sol          = newton_solve(op, u0, nc);
            auto err          = error_norms(op.grid, sol.samples, u0);
            double jmin       = jacobian_min_abs_eigenvalue(op, sol.samples);
            h2.push_back(err.h2);
            std::string tag = "delta " + sci(delta) + " ";
            if (delta == 0.05) {
                o.require(sol.iterations <= 8 && sol.final_residual < 1e-10,
                          tag + std::to_string(sol.iterations) + " iterations to " + sci(sol.final_residual));
            }
            o.require(jmin > 0, tag + "Jacobian min |eig| " + sci(jmin));
        }
        double order = fitted_order(P.deltas, h2);
        o.require(order >= 0.8, "H2 error order " + sci(order));
    });

    criterion(9, "determinism of verify-all", 900.0, [&cli](Outcome& o) {
        fs::path base = fs::temp_directory_path() / "diracsol_acceptance";
        fs::remove_all(base);
        std::vector<fs::path> runs{base / "run1", base / "run2"};
        for (auto const& r : runs) {
            std::string cmd = cli + " verify-all --out " + r.string() + " > " + (base / "log.txt").string() + " 2>&1";
            fs::create_directories(base);
            int status = std::system(cmd.c_str());
            int code   = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
            o.require(code == 0, "verify-all exit code " + std::to_string(code));
        }
        std::vector<std::string> names;
        for (auto const& e : fs::directory_iterator(runs[0])) {
            names.push_back(e.path().filename().string());
        }
        std::sort(names.begin(), names.end());
        std::size_t same = 0;
        for (auto const& n : names) {
            if (fs::exists(runs[1] / n) && slurp(runs[0] / n) == slurp(runs[1] / n)) {
                ++same;
            } else {
                o.require(false, n + " differs");
            }
        }
        std::size_t count_second = std::distance(fs::directory_iterator(runs[1]), fs::directory_iterator{});
        o.require(!names.empty() && count_second == names.size(),
                  std::to_string(same) + "/" + std::to_string(names.size()) + " files identical");
        fs::remove_all(base);
    });

    std::printf("%d of 9 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}

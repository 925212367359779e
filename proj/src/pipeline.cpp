#include "diracsol/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <optional>

#include "diracsol/bloch.hpp"
#include "diracsol/dirac_point.hpp"
#include "diracsol/errors.hpp"
#include "diracsol/multiscale.hpp"
#include "diracsol/newton.hpp"
#include "diracsol/nld.hpp"

namespace diracsol {

namespace fs = std::filesystem;

namespace {

struct Setup
{
    PeriodicPotential V;
    PeriodicPotential W;
    FourierCutoff cut;
    std::optional<DiracPointData> dirac;
    NLDParams params;
};

/// The μ window |mu| < a |theta| is enforced before any slow-scale work.
void require_frequency_window(NLDParams const& p, double a)
{
    if (!(std::abs(p.mu_sharp) < a * std::abs(p.theta_sharp))) {
        char buf[160];
        std::snprintf(buf, sizeof(buf), "mu_sharp = %.6g lies outside the window |mu| < %.3g |theta| = %.6g",
                      p.mu_sharp, a, a * std::abs(p.theta_sharp));
        throw ValidationError(buf);
    }
}

Setup make_setup(RunConfig const& cfg, bool allow_override)
{
    Setup s;
    s.V   = cfg.potential_V();
    s.W   = cfg.potential_W();
    s.cut = FourierCutoff{cfg.cutoff};
    if (allow_override && cfg.has_nld_override()) {
        s.params = NLDParams{*cfg.nld_c_sharp, *cfg.nld_theta_sharp, cfg.mu_sharp, *cfg.nld_beta1, *cfg.nld_beta2};
    } else {
        s.dirac  = analyse_dirac_point(s.V, s.W, s.cut, cfg.dirac_pair);
        s.params = NLDParams::from_dirac(*s.dirac, cfg.mu_sharp);
    }
    s.params.validate();
    require_frequency_window(s.params, cfg.gap_fraction);
    return s;
}

ordered_json pairs_json(std::vector<std::pair<int, double>> const& pairs)
{
    ordered_json a = ordered_json::array();
    for (auto const& [m, amp] : pairs) {
        a.push_back({m, amp});
    }
    return a;
}

ordered_json params_json(NLDParams const& p)
{
    ordered_json j;
    j["c_sharp"]      = p.c_sharp;
    j["theta_sharp"]  = p.theta_sharp;
    j["mu_sharp"]     = p.mu_sharp;
    j["beta1"]        = p.beta1;
    j["beta2"]        = p.beta2;
    j["a"]            = p.a();
    j["b"]            = p.b();
    j["decay_rate"]   = p.decay_rate();
    j["decay_length"] = p.decay_length();
    return j;
}

ordered_json with_provenance(ordered_json j, RunConfig const& cfg)
{
    auto p            = provenance(cfg);
    j["config"]       = p["config"];
    j["input_sha256"] = p["input_sha256"];
    return j;
}

void add_check(CommandResult& r, std::string name, bool pass, std::string const& detail)
{
    r.checks.push_back({std::move(name), pass, detail});
}

std::string fmt(char const* format, double a, double b = 0)
{
    char buf[200];
    std::snprintf(buf, sizeof(buf), format, a, b);
    return buf;
}

std::string delta_tag(double delta)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", delta);
    return buf;
}

ordered_json checks_json(std::vector<Check> const& checks)
{
    ordered_json a = ordered_json::array();
    for (auto const& c : checks) {
        ordered_json j;
        j["name"]   = c.name;
        j["pass"]   = c.pass;
        j["detail"] = c.detail;
        a.push_back(j);
    }
    return a;
}

/// Write a JSON file and record it.
void emit(CommandResult& r, fs::path const& out, std::string const& name, ordered_json const& j)
{
    write_json(out / name, j);
    r.files.push_back(name);
}

ordered_json number_array(std::vector<double> const& v)
{
    ordered_json a = ordered_json::array();
    for (double x : v) {
        a.push_back(json_number(x));
    }
    return a;
}

double successive_order(double d0, double d1, double e0, double e1)
{
    return std::log(e0 / e1) / std::log(d0 / d1);
}

} // namespace

bool CommandResult::all_passed() const
{
    return std::all_of(checks.begin(), checks.end(), [](Check const& c) { return c.pass; });
}

void CommandResult::append(CommandResult const& other)
{
    files.insert(files.end(), other.files.begin(), other.files.end());
    checks.insert(checks.end(), other.checks.begin(), other.checks.end());
}

ordered_json provenance(RunConfig const& cfg)
{
    ordered_json j;
    j["config"]       = cfg.to_json();
    j["input_sha256"] = sha256_hex(j["config"].dump());
    return j;
}

CommandResult cmd_bands(RunConfig const& cfg, fs::path const& out)
{
    fs::create_directories(out);
    auto V   = cfg.potential_V();
    auto cut = FourierCutoff{cfg.cutoff};
    auto k   = uniform_k_grid(cfg.k_points);
    auto sw  = band_sweep(V, k, cut);

    CommandResult r;
    {
        CsvWriter csv(out / "bands.csv", {"k", "band_index", "mu"});
        for (std::size_t i = 0; i < sw.k_grid.size(); ++i) {
            for (int n = 0; n < cfg.n_bands; ++n) {
                csv.row({sw.k_grid[i], static_cast<double>(n + 1), sw.solutions[i].values()[n]});
            }
        }
    }
    r.files.push_back("bands.csv");

    ordered_json ranges = ordered_json::array();
    for (int n = 0; n < cfg.n_bands; ++n) {
        double lo = std::numeric_limits<double>::infinity();
        double hi = -lo;
        for (auto const& s : sw.solutions) {
            lo = std::min(lo, s.values()[n]);
            hi = std::max(hi, s.values()[n]);
        }
        ordered_json b;
        b["band_index"] = n + 1;
        b["min"]        = lo;
        b["max"]        = hi;
        ranges.push_back(b);
    }
    double defect = sw.reflection_defect(cfg.n_bands);
    add_check(r, "bands.reflection_symmetry", defect <= 1e-9, fmt("max |mu_n(k) - mu_n(2pi - k)| = %.3e", defect));

    ordered_json j;
    j["k_points"]          = cfg.k_points;
    j["n_bands"]           = cfg.n_bands;
    j["potential_V"]       = pairs_json(V.pairs());
    j["band_ranges"]       = ranges;
    j["reflection_defect"] = defect;
    j["checks"]            = checks_json(r.checks);
    emit(r, out, "bands.json", with_provenance(j, cfg));
    return r;
}

CommandResult cmd_dirac(RunConfig const& cfg, fs::path const& out)
{
    fs::create_directories(out);
    auto V    = cfg.potential_V();
    auto W    = cfg.potential_W();
    auto cut  = FourierCutoff{cfg.cutoff};
    auto d    = analyse_dirac_point(V, W, cut, cfg.dirac_pair);
    auto sl   = band_slope_oracle(V, d);
    double sd = bloch_pair_symmetry_defect(d);

    CommandResult r;
    double c_abs     = std::abs(d.c_sharp);
    double slope_rel = std::max(std::abs(std::abs(sl.slope_minus) - c_abs), std::abs(std::abs(sl.slope_plus) - c_abs)) /
                       c_abs;
    double branch_rel = std::abs(sl.g1_branch + d.c_sharp) / c_abs;
    add_check(r, "dirac.slope_oracle", std::max(slope_rel, branch_rel) <= 1e-4,
              fmt("relative slope mismatch %.3e (g1 branch %.3e)", slope_rel, branch_rel));
    add_check(r, "dirac.beta_bound", std::abs(d.beta2) <= d.beta1,
              fmt("beta1 = %.12g, beta2 = %.12g", d.beta1, d.beta2));
    add_check(r, "dirac.bloch_pair_symmetry", sd <= 1e-10, fmt("defect %.3e", sd));

    ordered_json j;
    j["band_pair"]       = {d.band_pair.first, d.band_pair.second};
    j["mu_star"]         = d.mu_star;
    j["c_sharp"]         = d.c_sharp;
    j["c_sharp_from_g2"] = c_sharp_from_g2(d);
    j["theta_sharp"]     = d.theta_sharp;
    j["beta1"]           = d.beta1;
    j["beta2"]           = d.beta2;
    j["cutoff"]          = d.cutoff.M;
    ordered_json spec;
    spec["V"]           = pairs_json(V.pairs());
    spec["W"]           = pairs_json(W.pairs());
    j["potential_spec"] = spec;
    ordered_json slopes;
    slopes["slope_minus"]           = sl.slope_minus;
    slopes["slope_plus"]            = sl.slope_plus;
    slopes["g1_branch"]             = sl.g1_branch;
    j["band_slopes"]                = slopes;
    j["bloch_pair_symmetry_defect"] = sd;

    auto kg           = gap_k_grid(cfg.gap_k_cluster, cfg.gap_k_coarse);
    ordered_json gaps = ordered_json::array();
    for (double delta : cfg.gap_deltas) {
        auto g = verify_gap_opening(V, W, d, delta, cfg.gap_fraction, kg);
        ordered_json gj;
        gj["delta"]              = delta;
        gj["a"]                  = g.a;
        gj["interval"]           = {g.lower, g.upper};
        gj["half_gap_at_pi"]     = g.half_gap_at_pi;
        gj["predicted_half_gap"] = delta * std::abs(d.theta_sharp);
        gj["k_samples"]          = kg.size();
        gj["violation_count"]    = g.violations.size();
        ordered_json viol        = ordered_json::array();
        for (auto const& v : g.violations) {
            ordered_json vj;
            vj["k"]          = v.k;
            vj["band_index"] = v.band;
            vj["mu"]         = v.mu;
            viol.push_back(vj);
        }
        gj["violations"] = viol;
        gaps.push_back(gj);

        // at delta = 0 the interval is the single point mu*, which is a band value
        if (delta > 0) {
            std::string tag = delta_tag(delta);
            add_check(r, "gap.open delta=" + tag, g.ok(),
                      std::to_string(g.violations.size()) + " band values inside the interval");
            double pred = delta * std::abs(d.theta_sharp);
            double rel  = std::abs(g.half_gap_at_pi - pred) / pred;
            add_check(r, "gap.half_width delta=" + tag, rel <= 0.1,
                      fmt("half-gap %.6g against delta|theta| = %.6g", g.half_gap_at_pi, pred));
        }
    }
    j["checks"] = checks_json(r.checks);
    emit(r, out, "dirac_point.json", with_provenance(j, cfg));

    ordered_json gr;
    gr["mu_star"]     = d.mu_star;
    gr["theta_sharp"] = d.theta_sharp;
    gr["reports"]     = gaps;
    emit(r, out, "gap_report.json", with_provenance(gr, cfg));
    return r;
}

CommandResult cmd_nld(RunConfig const& cfg, fs::path const& out)
{
    fs::create_directories(out);
    auto s = make_setup(cfg, true);
    HomoclinicOptions opts;
    opts.y_max                    = cfg.y_max;
    opts.tol                      = cfg.nld_tol;
    opts.samples_per_decay_length = cfg.nld_samples_per_decay_length;
    opts.flip_branch              = cfg.flip_branch;
    auto prof                     = integrate_homoclinic(s.params, opts);
    auto kr                       = kernel_check_on_Y(s.params, prof, cfg.kernel_points);

    auto dpsi = profile_derivative(prof);
    auto img  = d0_apply(s.params, prof, dpsi);
    double num{0}, den{0};
    for (std::size_t i = 0; i < img.size(); ++i) {
        num += std::norm(img[i][0]) + std::norm(img[i][1]);
        den += std::norm(dpsi[i][0]) + std::norm(dpsi[i][1]);
    }
    double d0_ratio = std::sqrt(num / den);
    double h_abs{0};
    for (double h : prof.hamiltonian_trace) {
        h_abs = std::max(h_abs, std::abs(h));
    }

    {
        CsvWriter csv(out / "nld_profile.csv", {"y", "u", "v", "re_psi_minus", "im_psi_minus", "H"});
        for (std::size_t i = 0; i < prof.size(); ++i) {
            auto pm = prof.psi_minus(i);
            csv.row({prof.y[i], prof.u[i], prof.v[i], pm.real(), pm.imag(), prof.hamiltonian_trace[i]});
        }
    }

    CommandResult r;
    r.files.push_back("nld_profile.csv");
    double rate     = s.params.decay_rate();
    double rate_rel = std::abs(prof.decay_rate_fit - rate) / rate;
    add_check(r, "nld.hamiltonian_drift", prof.h_drift_max <= 1e-9, fmt("max drift %.3e", prof.h_drift_max));
    add_check(r, "nld.zero_level", h_abs <= 1e-9, fmt("max |H| %.3e", h_abs));
    add_check(r, "nld.mirror_symmetry", prof.parity_defect <= 1e-9, fmt("defect %.3e", prof.parity_defect));
    add_check(r, "nld.decay_rate", rate_rel <= 0.02,
              fmt("fitted %.8g against %.8g", prof.decay_rate_fit, rate));
    add_check(r, "nld.derivative_in_kernel", d0_ratio <= 1e-6, fmt("|D0 Psi'| / |Psi'| = %.3e", d0_ratio));
    add_check(r, "nld.symmetric_subspace_invertible",
              kr.sigma_min_restricted > 10 * kr.sigma_min_unrestricted,
              fmt("sigma_min on Y %.6g, unrestricted %.3e", kr.sigma_min_restricted, kr.sigma_min_unrestricted));

    auto ic = initial_condition(s.params);
    ordered_json eq = ordered_json::array();
    for (auto const& e : equilibria(s.params)) {
        eq.push_back({e[0], e[1]});
    }
    ordered_json j;
    j["params"]                 = params_json(s.params);
    j["from_dirac_point"]       = s.dirac.has_value();
    j["initial_condition"]      = {ic[0], ic[1]};
    j["equilibria"]             = eq;
    j["y_max"]                  = prof.y_max();
    j["samples"]                = prof.size();
    j["decay_rate_fit"]         = prof.decay_rate_fit;
    j["decay_rate_expected"]    = rate;
    j["h_drift_max"]            = prof.h_drift_max;
    j["max_abs_hamiltonian"]    = h_abs;
    j["parity_defect"]          = prof.parity_defect;
    j["angle_monotone"]         = prof.angle_monotone;
    j["d0_derivative_ratio"]    = d0_ratio;
    j["sigma_min_restricted"]   = kr.sigma_min_restricted;
    j["sigma_min_unrestricted"] = kr.sigma_min_unrestricted;
    j["operator_norm"]          = kr.operator_norm;
    j["kernel_points"]          = kr.points;
    j["kernel_half_width"]      = kr.half_width;
    j["checks"]                 = checks_json(r.checks);
    emit(r, out, "nld_diagnostics.json", with_provenance(j, cfg));
    return r;
}

CommandResult cmd_soliton(RunConfig const& cfg, fs::path const& out)
{
    fs::create_directories(out);
    auto s  = make_setup(cfg, false);
    auto& d = *s.dirac;

    std::vector<double> deltas = cfg.deltas;
    std::sort(deltas.begin(), deltas.end(), std::greater<>());
    if (std::adjacent_find(deltas.begin(), deltas.end()) != deltas.end()) {
        throw ValidationError("deltas must be distinct");
    }

    auto half_width = [&](double delta) {
        return cfg.domain_half_width > 0 ? cfg.domain_half_width
                                         : ansatz_half_width(s.params, d, delta, cfg.amplitude_floor);
    };
    double y_needed{0};
    for (double delta : deltas) {
        y_needed = std::max(y_needed, delta * half_width(delta));
    }
    HomoclinicOptions opts;
    opts.y_max                    = std::max(cfg.y_max > 0 ? cfg.y_max : 30 * s.params.decay_length(), 1.01 * y_needed);
    opts.tol                      = cfg.nld_tol;
    opts.samples_per_decay_length = cfg.nld_samples_per_decay_length;
    opts.flip_branch              = cfg.flip_branch;
    auto prof                     = integrate_homoclinic(s.params, opts);

    auto forcing = build_G1(d, s.W, prof);
    auto solv    = solvability_check(forcing, d);
    auto corr    = solve_U1(forcing, d, s.V);

    CommandResult r;
    add_check(r, "multiscale.solvability", solv.relative <= 1e-6,
              fmt("max relative kernel projection %.3e", solv.relative));
    add_check(r, "multiscale.corrector_orthogonal", corr.max_kernel_overlap <= 1e-10,
              fmt("max overlap with the Bloch pair %.3e", corr.max_kernel_overlap));

    double hr  = 1.0 / cfg.residual_points_per_cell;
    double hn  = 1.0 / cfg.newton_points_per_cell;
    long sr    = std::max(1, cfg.residual_points_per_cell / cfg.csv_points_per_cell);
    long sn    = std::max(1, cfg.newton_points_per_cell / cfg.csv_points_per_cell);
    auto par   = parity_for(d.theta_sharp);

    std::vector<double> res_full, res_u0, l2, h2;
    ordered_json reports = ordered_json::array();
    std::optional<SolitonField> previous;
    for (double delta : deltas) {
        std::string tag = delta_tag(delta);
        double L        = half_width(delta);
        double mu_delta = d.mu_star + delta * s.params.mu_sharp;

        {
            auto field = assemble_udelta(d, prof, &corr, delta, L, hr);
            auto res   = residual_field(field, s.V, s.W);
            double rn{0};
            for (double x : res) {
                rn += x * x;
            }
            res_full.push_back(std::sqrt(hr * rn));
            {
                CsvWriter csv(out / ("ansatz_delta_" + tag + ".csv"), {"x", "u_delta", "residual"});
                for (std::size_t i = 0; i < field.samples.size(); i += sr) {
                    csv.row({field.x(i), field.samples[i], res[i]});
                }
            }
            r.files.push_back("ansatz_delta_" + tag + ".csv");

            double sd = std::sqrt(delta);
            for (std::size_t i = 0; i < field.samples.size(); ++i) {
                field.samples[i] = sd * field.u0[i];
            }
            res_u0.push_back(residual_norm(field, s.V, s.W));
        }

        auto op = discretize_operator(s.V, s.W, delta, mu_delta, hn, L, par);
        auto x  = op.grid.points();
        auto u0 = build_U0(d, prof, delta, x);
        for (auto& v : u0) {
            v *= std::sqrt(delta);
        }
        NewtonConfig nc;
        nc.max_iters      = cfg.newton_max_iters;
        nc.tol            = cfg.newton_tol;
        nc.damping        = cfg.newton_damping;
        nc.parity         = par;
        nc.reference_norm = op.norm(u0);
        bool warm         = previous && delta < 0.025;
        auto guess        = warm ? continuation_guess(*previous, op.grid, delta) : u0;
        auto sol          = newton_solve(op, std::move(guess), nc);
        auto err          = error_norms(op.grid, sol.samples, u0);
        sol.l2_error      = err.l2;
        sol.h2_error      = err.h2;
        sol.jacobian_min_eig = jacobian_min_abs_eigenvalue(op, sol.samples);
        l2.push_back(err.l2);
        h2.push_back(err.h2);

        {
            CsvWriter csv(out / ("soliton_delta_" + tag + ".csv"), {"x", "u"});
            for (long jx = 0; jx < op.grid.n; jx += sn) {
                csv.row({op.grid.x(jx), sol.samples[jx]});
            }
        }
        r.files.push_back("soliton_delta_" + tag + ".csv");

        ordered_json rep;
        rep["delta"]                = delta;
        rep["mu_delta"]             = mu_delta;
        rep["iters"]                = sol.iterations;
        rep["final_residual"]       = sol.final_residual;
        rep["l2_error"]             = sol.l2_error;
        rep["h2_error"]             = sol.h2_error;
        rep["jacobian_min_eig"]     = sol.jacobian_min_eig;
        rep["newton_history"]       = sol.newton_history;
        rep["convergence_order"]    = json_number(sol.convergence_order);
        rep["warm_start"]           = warm;
        rep["parity"]               = par == Parity::Even ? "even" : "odd";
        rep["h"]                    = hn;
        rep["half_width"]           = op.grid.half_width();
        rep["unknowns"]             = op.grid.n;
        rep["ansatz_residual_norm"] = res_full.back();
        emit(r, out, "soliton_delta_" + tag + ".json", with_provenance(rep, cfg));
        reports.push_back(rep);

        add_check(r, "newton.converged delta=" + tag, sol.iterations <= 8 && sol.final_residual < cfg.newton_tol,
                  fmt("%.0f iterations, residual %.3e", sol.iterations, sol.final_residual));
        add_check(r, "newton.jacobian_nonsingular delta=" + tag, sol.jacobian_min_eig > 0,
                  fmt("min |eigenvalue| %.6g", sol.jacobian_min_eig));
        previous = std::move(sol);
    }

    bool fit          = deltas.size() >= 2;
    double nan        = std::numeric_limits<double>::quiet_NaN();
    double res_order  = fit ? fitted_order(deltas, res_full) : nan;
    double u0_order   = fit ? fitted_order(deltas, res_u0) : nan;
    double h2_order   = fit ? fitted_order(deltas, h2) : nan;
    double l2_order   = fit ? fitted_order(deltas, l2) : nan;
    std::vector<double> succ;
    for (std::size_t i = 0; i + 1 < deltas.size(); ++i) {
        succ.push_back(successive_order(deltas[i], deltas[i + 1], res_full[i], res_full[i + 1]));
    }
    if (fit) {
        add_check(r, "multiscale.residual_order", res_order >= 0.8, fmt("fitted order %.4f", res_order));
        add_check(r, "newton.h2_error_order", h2_order >= 0.8, fmt("fitted order %.4f", h2_order));
    }

    ordered_json sv;
    sv["max_projection"]   = solv.max_projection;
    sv["max_forcing_norm"] = solv.max_forcing_norm;
    sv["relative"]         = solv.relative;
    sv["worst_y"]          = solv.worst_y;
    ordered_json cj;
    cj["max_residual"]             = corr.max_residual;
    cj["max_kernel_overlap"]       = corr.max_kernel_overlap;
    cj["nearest_other_eigenvalue"] = corr.nearest_other_eigenvalue;

    ordered_json j;
    j["mu_star"]                     = d.mu_star;
    j["params"]                      = params_json(s.params);
    j["profile_y_max"]               = prof.y_max();
    j["deltas"]                      = deltas;
    j["residual_norms"]              = res_full;
    j["fitted_order"]                = json_number(res_order);
    j["successive_orders"]           = number_array(succ);
    j["residual_norms_leading_only"] = res_u0;
    j["fitted_order_leading_only"]   = json_number(u0_order);
    j["l2_errors"]                   = l2;
    j["h2_errors"]                   = h2;
    j["l2_error_order"]              = json_number(l2_order);
    j["h2_error_order"]              = json_number(h2_order);
    j["largest_converged_delta"]     = deltas.front();
    j["solvability"]                 = sv;
    j["corrector"]                   = cj;
    j["reports"]                     = reports;
    j["checks"]                      = checks_json(r.checks);
    emit(r, out, "soliton_scaling.json", with_provenance(j, cfg));
    return r;
}

CommandResult cmd_verify_all(RunConfig const& cfg, fs::path const& out)
{
    CommandResult r;
    r.append(cmd_bands(cfg, out));
    r.append(cmd_dirac(cfg, out));
    r.append(cmd_nld(cfg, out));
    r.append(cmd_soliton(cfg, out));

    ordered_json j;
    j["all_passed"] = r.all_passed();
    j["checks"]     = checks_json(r.checks);
    j["files"]      = r.files;
    emit(r, out, "verify_all.json", with_provenance(j, cfg));
    return r;
}

} // namespace diracsol

// Command-line driver: bands, dirac, nld, soliton, verify-all.

#include <cstdio>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "diracsol/config.hpp"
#include "diracsol/errors.hpp"
#include "diracsol/pipeline.hpp"

using namespace diracsol;

namespace {

enum ExitCode
{
    ok         = 0,
    validation = 2,
    numerical  = 3
};

void print_checks(CommandResult const& r)
{
    for (auto const& c : r.checks) {
        std::printf("%-4s %s: %s\n", c.pass ? "PASS" : "FAIL", c.name.c_str(), c.detail.c_str());
    }
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Dirac points of 1D periodic Schrodinger operators, their nonlinear Dirac envelopes and gap solitons"};
    app.require_subcommand(1, 1);
    app.fallthrough();

    std::string config_path;
    std::string out_dir;
    std::string delta_list;
    std::vector<std::string> overrides;
    bool seed{false};
    app.add_option("--config", config_path, "Config file of `key = value` lines");
    app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
    app.add_option("--delta", delta_list, "Comma-separated deltas (overrides deltas)");
    app.add_option("--set", overrides, "Extra `key=value` setting; repeatable");
    app.add_flag("--seed-regressions", seed, "Copy outputs into <out>/golden instead of comparing against it");

    auto* bands  = app.add_subcommand("bands", "Band table on a uniform quasi-momentum grid");
    auto* dirac  = app.add_subcommand("dirac", "Dirac point, effective coefficients and gap check");
    auto* nld    = app.add_subcommand("nld", "Homoclinic orbit of the nonlinear Dirac system");
    auto* sol    = app.add_subcommand("soliton", "Two-scale ansatz residuals and Newton solitons");
    auto* verify = app.add_subcommand("verify-all", "Run every command and summarize all checks");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? ok : validation;
    }

    try {
        RunConfig cfg = config_path.empty() ? RunConfig{} : load_config(config_path);
        std::string extra;
        for (auto const& kv : overrides) {
            auto eq = kv.find('=');
            if (eq == std::string::npos) {
                throw ValidationError("--set expects key=value, got '" + kv + "'");
            }
            extra += kv.substr(0, eq) + " = " + kv.substr(eq + 1) + "\n";
        }
        if (!extra.empty()) {
            cfg = parse_config(extra, cfg);
        }
        if (!delta_list.empty()) {
            cfg.deltas = parse_number_list(delta_list);
        }
        if (!out_dir.empty()) {
            cfg.output_dir = out_dir;
        }
        cfg.validate();

        std::filesystem::path out = cfg.output_dir;
        CommandResult r;
        if (bands->parsed()) {
            r = cmd_bands(cfg, out);
        } else if (dirac->parsed()) {
            r = cmd_dirac(cfg, out);
        } else if (nld->parsed()) {
            r = cmd_nld(cfg, out);
        } else if (sol->parsed()) {
            r = cmd_soliton(cfg, out);
        } else if (verify->parsed()) {
            r = cmd_verify_all(cfg, out);
        }
        print_checks(r);

        auto golden = golden_files(out, out / "golden", r.files, seed);
        if (seed) {
            std::printf("seeded %zu golden files in %s\n", golden.matched.size(), (out / "golden").c_str());
        } else if (!golden.matched.empty() || !golden.mismatched.empty()) {
            std::printf("golden files: %zu matched, %zu differ\n", golden.matched.size(), golden.mismatched.size());
            for (auto const& f : golden.mismatched) {
                std::printf("DIFF %s\n", f.c_str());
            }
        }

        if (!golden.ok()) {
            std::cerr << "error: outputs differ from the golden files\n";
            return numerical;
        }
        if (verify->parsed() && !r.all_passed()) {
            std::cerr << "error: some checks failed\n";
            return numerical;
        }
        return ok;
    } catch (ValidationError const& e) {
        std::cerr << "validation error: " << e.what() << "\n";
        return validation;
    } catch (NumericalError const& e) {
        std::cerr << "numerical error: " << e.what() << "\n";
        return numerical;
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << "\n";
        return numerical;
    }
}

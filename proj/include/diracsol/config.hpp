#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "diracsol/potential.hpp"

namespace diracsol {

/// Settings for one experiment. Loaded from `key = value` lines whose values
/// are JSON literals, e.g. `V = [[2, 20.0]]` or `deltas = [0.1, 0.05]`.
struct RunConfig
{
    std::vector<std::pair<int, double>> V{{2, 20.0}};
    std::vector<std::pair<int, double>> W{{1, 1.0}};
    int cutoff{64};
    int dirac_pair{1};

    double mu_sharp{0};
    double gap_fraction{0.9};
    std::vector<double> deltas{0.1, 0.05, 0.025};
    std::vector<double> gap_deltas{0.05, 0.1};

    int k_points{33};
    int n_bands{8};
    int gap_k_cluster{401};
    int gap_k_coarse{129};

    double y_max{0};
    double nld_tol{1e-12};
    int nld_samples_per_decay_length{100};
    int kernel_points{401};
    bool flip_branch{false};
    /// When all four are set, `nld` uses them instead of the Dirac point.
    std::optional<double> nld_c_sharp, nld_theta_sharp, nld_beta1, nld_beta2;

    int newton_points_per_cell{128};
    int residual_points_per_cell{256};
    double domain_half_width{0};
    double amplitude_floor{1e-8};
    int newton_max_iters{25};
    double newton_tol{1e-10};
    double newton_damping{1.0};
    int csv_points_per_cell{16};

    std::string output_dir{"out"};

    PeriodicPotential potential_V() const;
    PeriodicPotential potential_W() const;

    bool has_nld_override() const
    {
        return nld_c_sharp && nld_theta_sharp && nld_beta1 && nld_beta2;
    }

    /// Throws ValidationError on any inconsistent setting.
    void validate() const;

    nlohmann::ordered_json to_json() const;
};

/// Parse config text; unknown keys and malformed values raise ValidationError.
RunConfig parse_config(std::string const& text, RunConfig base = {});

RunConfig load_config(std::string const& path);

/// Set one key from a JSON literal (also used for command-line overrides).
void apply_setting(RunConfig& cfg, std::string const& key, nlohmann::json const& value);

/// Comma-separated list of numbers.
std::vector<double> parse_number_list(std::string const& text);

} // namespace diracsol

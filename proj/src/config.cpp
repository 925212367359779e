#include "diracsol/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "diracsol/bloch.hpp"
#include "diracsol/errors.hpp"

namespace diracsol {

namespace {

using json = nlohmann::json;

std::string trim(std::string const& s)
{
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) {
        return {};
    }
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

template <typename T>
T as(json const& v, std::string const& key)
{
    try {
        return v.get<T>();
    } catch (json::exception const&) {
        throw ValidationError("config key '" + key + "' has an invalid value: " + v.dump());
    }
}

std::vector<std::pair<int, double>> as_pairs(json const& v, std::string const& key)
{
    if (!v.is_array()) {
        throw ValidationError("config key '" + key + "' must be a list of [index, amplitude] pairs");
    }
    std::vector<std::pair<int, double>> out;
    for (auto const& p : v) {
        if (!p.is_array() || p.size() != 2 || !p[0].is_number_integer() || !p[1].is_number()) {
            throw ValidationError("config key '" + key + "' must be a list of [index, amplitude] pairs");
        }
        out.emplace_back(p[0].get<int>(), p[1].get<double>());
    }
    return out;
}

std::optional<double> as_optional(json const& v, std::string const& key)
{
    if (v.is_null()) {
        return std::nullopt;
    }
    return as<double>(v, key);
}

json pairs_json(std::vector<std::pair<int, double>> const& pairs)
{
    json a = json::array();
    for (auto const& [m, amp] : pairs) {
        a.push_back({m, amp});
    }
    return a;
}

json optional_json(std::optional<double> const& v)
{
    return v ? json(*v) : json(nullptr);
}

} // namespace

PeriodicPotential RunConfig::potential_V() const
{
    try {
        return PeriodicPotential::from_pairs(V, ParityClass::EvenIndex);
    } catch (ValidationError const& e) {
        throw ValidationError(std::string("V: ") + e.what());
    }
}

PeriodicPotential RunConfig::potential_W() const
{
    try {
        return PeriodicPotential::from_pairs(W, ParityClass::OddIndex);
    } catch (ValidationError const& e) {
        throw ValidationError(std::string("W: ") + e.what());
    }
}

void RunConfig::validate() const
{
    auto v = potential_V();
    auto w = potential_W();
    FourierCutoff{cutoff}.require(std::max(v.max_index(), w.max_index()), 2);

    auto fail = [](std::string const& msg) { throw ValidationError(msg); };
    if (dirac_pair < 1) {
        fail("dirac_pair must be a positive ordinal");
    }
    if (!(gap_fraction > 0 && gap_fraction < 1)) {
        fail("gap_fraction must lie in (0, 1)");
    }
    if (!std::isfinite(mu_sharp)) {
        fail("mu_sharp must be finite");
    }
    if (deltas.empty()) {
        fail("deltas must not be empty");
    }
    for (double d : deltas) {
        if (d == 0) {
            fail("delta = 0 is rejected: no soliton exists without the gap-opening perturbation");
        }
        if (!(d > 0 && d < 1)) {
            fail("every delta must lie in (0, 1)");
        }
    }
    for (double d : gap_deltas) {
        if (!(d >= 0 && d < 1)) {
            fail("gap_deltas must lie in [0, 1)");
        }
    }
    if (k_points < 2 || n_bands < 1 || n_bands > 2 * cutoff + 1) {
        fail("k_points must be >= 2 and n_bands within the retained spectrum");
    }
    if (gap_k_cluster < 1 || gap_k_coarse < 2) {
        fail("gap k-grid sizes are too small");
    }
    if (y_max < 0 || !(nld_tol > 0) || nld_samples_per_decay_length < 8) {
        fail("y_max must be >= 0 (0 = automatic), nld_tol > 0, nld_samples_per_decay_length >= 8");
    }
    if (kernel_points < 5 || kernel_points % 2 == 0) {
        fail("kernel_points must be odd and at least 5");
    }
    if (newton_points_per_cell < 64 || residual_points_per_cell < 64) {
        fail("grids must resolve the cell with at least 64 points");
    }
    if (domain_half_width < 0 || !(amplitude_floor > 0)) {
        fail("domain_half_width must be >= 0 (0 = automatic) and amplitude_floor > 0");
    }
    if (newton_max_iters < 1 || !(newton_tol > 0) || !(newton_damping > 0 && newton_damping <= 1)) {
        fail("Newton settings need max_iters >= 1, tol > 0 and damping in (0, 1]");
    }
    if (csv_points_per_cell < 1) {
        fail("csv_points_per_cell must be >= 1");
    }
    int overrides = !!nld_c_sharp + !!nld_theta_sharp + !!nld_beta1 + !!nld_beta2;
    if (overrides != 0 && overrides != 4) {
        fail("set all of nld_c_sharp, nld_theta_sharp, nld_beta1, nld_beta2 or none");
    }
    if (output_dir.empty()) {
        fail("output_dir must not be empty");
    }
}

nlohmann::ordered_json RunConfig::to_json() const
{
    nlohmann::ordered_json j;
    j["V"]                            = pairs_json(V);
    j["W"]                            = pairs_json(W);
    j["cutoff"]                       = cutoff;
    j["dirac_pair"]                   = dirac_pair;
    j["mu_sharp"]                     = mu_sharp;
    j["gap_fraction"]                 = gap_fraction;
    j["deltas"]                       = deltas;
    j["gap_deltas"]                   = gap_deltas;
    j["k_points"]                     = k_points;
    j["n_bands"]                      = n_bands;
    j["gap_k_cluster"]                = gap_k_cluster;
    j["gap_k_coarse"]                 = gap_k_coarse;
    j["y_max"]                        = y_max;
    j["nld_tol"]                      = nld_tol;
    j["nld_samples_per_decay_length"] = nld_samples_per_decay_length;
    j["kernel_points"]                = kernel_points;
    j["flip_branch"]                  = flip_branch;
    j["nld_c_sharp"]                  = optional_json(nld_c_sharp);
    j["nld_theta_sharp"]              = optional_json(nld_theta_sharp);
    j["nld_beta1"]                    = optional_json(nld_beta1);
    j["nld_beta2"]                    = optional_json(nld_beta2);
    j["newton_points_per_cell"]       = newton_points_per_cell;
    j["residual_points_per_cell"]     = residual_points_per_cell;
    j["domain_half_width"]            = domain_half_width;
    j["amplitude_floor"]              = amplitude_floor;
    j["newton_max_iters"]             = newton_max_iters;
    j["newton_tol"]                   = newton_tol;
    j["newton_damping"]               = newton_damping;
    j["csv_points_per_cell"]          = csv_points_per_cell;
    return j;
}

void apply_setting(RunConfig& c, std::string const& key, json const& v)
{
    if (key == "V") c.V = as_pairs(v, key);
    else if (key == "W") c.W = as_pairs(v, key);
    else if (key == "cutoff") c.cutoff = as<int>(v, key);
    else if (key == "dirac_pair") c.dirac_pair = as<int>(v, key);
    else if (key == "mu_sharp") c.mu_sharp = as<double>(v, key);
    else if (key == "gap_fraction") c.gap_fraction = as<double>(v, key);
    else if (key == "deltas") c.deltas = as<std::vector<double>>(v, key);
    else if (key == "gap_deltas") c.gap_deltas = as<std::vector<double>>(v, key);
    else if (key == "k_points") c.k_points = as<int>(v, key);
    else if (key == "n_bands") c.n_bands = as<int>(v, key);
    else if (key == "gap_k_cluster") c.gap_k_cluster = as<int>(v, key);
    else if (key == "gap_k_coarse") c.gap_k_coarse = as<int>(v, key);
    else if (key == "y_max") c.y_max = as<double>(v, key);
    else if (key == "nld_tol") c.nld_tol = as<double>(v, key);
    else if (key == "nld_samples_per_decay_length") c.nld_samples_per_decay_length = as<int>(v, key);
    else if (key == "kernel_points") c.kernel_points = as<int>(v, key);
    else if (key == "flip_branch") c.flip_branch = as<bool>(v, key);
    else if (key == "nld_c_sharp") c.nld_c_sharp = as_optional(v, key);
    else if (key == "nld_theta_sharp") c.nld_theta_sharp = as_optional(v, key);
    else if (key == "nld_beta1") c.nld_beta1 = as_optional(v, key);
    else if (key == "nld_beta2") c.nld_beta2 = as_optional(v, key);
    else if (key == "newton_points_per_cell") c.newton_points_per_cell = as<int>(v, key);
    else if (key == "residual_points_per_cell") c.residual_points_per_cell = as<int>(v, key);
    else if (key == "domain_half_width") c.domain_half_width = as<double>(v, key);
    else if (key == "amplitude_floor") c.amplitude_floor = as<double>(v, key);
    else if (key == "newton_max_iters") c.newton_max_iters = as<int>(v, key);
    else if (key == "newton_tol") c.newton_tol = as<double>(v, key);
    else if (key == "newton_damping") c.newton_damping = as<double>(v, key);
    else if (key == "csv_points_per_cell") c.csv_points_per_cell = as<int>(v, key);
    else if (key == "output_dir") c.output_dir = as<std::string>(v, key);
    else throw ValidationError("unknown config key '" + key + "'");
}

RunConfig parse_config(std::string const& text, RunConfig base)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ValidationError("config line " + std::to_string(lineno) + ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string val = trim(line.substr(eq + 1));
        json parsed     = json::parse(val, nullptr, false);
        if (parsed.is_discarded()) {
            // bare words such as paths are taken as strings
            parsed = val;
        }
        apply_setting(base, key, parsed);
    }
    base.validate();
    return base;
}

RunConfig load_config(std::string const& path)
{
    std::ifstream in(path);
    if (!in) {
        throw ValidationError("cannot read config file " + path);
    }
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::vector<double> parse_number_list(std::string const& text)
{
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) {
            continue;
        }
        std::size_t used = 0;
        double v{0};
        try {
            v = std::stod(item, &used);
        } catch (std::exception const&) {
            used = 0;
        }
        if (used != item.size()) {
            throw ValidationError("not a number: '" + item + "'");
        }
        out.push_back(v);
    }
    if (out.empty()) {
        throw ValidationError("empty number list");
    }
    return out;
}

} // namespace diracsol

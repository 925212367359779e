#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "diracsol/config.hpp"
#include "diracsol/report.hpp"

namespace diracsol {

/// One named pass/fail outcome recorded in a command's output.
struct Check
{
    std::string name;
    bool pass{false};
    std::string detail;
};

struct CommandResult
{
    /// Files written, relative to the output directory, in write order.
    std::vector<std::string> files;
    std::vector<Check> checks;

    bool all_passed() const;
    void append(CommandResult const& other);
};

/// Config echo plus the SHA-256 of its compact dump; embedded in every JSON output.
ordered_json provenance(RunConfig const& cfg);

/// Band table `k,band_index,mu` on a uniform k grid plus a JSON summary.
CommandResult cmd_bands(RunConfig const& cfg, std::filesystem::path const& out);

/// dirac_point.json and gap_report.json.
CommandResult cmd_dirac(RunConfig const& cfg, std::filesystem::path const& out);

/// Homoclinic profile CSV and its diagnostics, including the kernel check.
CommandResult cmd_nld(RunConfig const& cfg, std::filesystem::path const& out);

/// Two-scale ansatz residuals and Newton solitons for every delta, plus the scaling summary.
CommandResult cmd_soliton(RunConfig const& cfg, std::filesystem::path const& out);

/// Every command above, then verify_all.json listing all checks.
CommandResult cmd_verify_all(RunConfig const& cfg, std::filesystem::path const& out);

} // namespace diracsol

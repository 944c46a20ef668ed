#pragma once

#include "covrel/covering.hpp"
#include "covrel/dynamics.hpp"
#include "covrel/enclosure.hpp"

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace covrel {

/// Everything a CLI run needs. Numeric fields that denote real numbers are
/// kept as text so that decimals are enclosed exactly when resolved.
///
/// On disk this is an INI document:
///
///   [run]     subcommand, map, mode, scheme, refine_depth, max_failures,
///             sequence, eta, A, report, cells, jobs, check_endpoint
///   [domain]  ru, rs, mobius_stable
///   [params]  name = constant expression or [lo, hi]
///   [map]     name, theta_out, x_out, y_out, h_theta, h_x, h_y,
///             eta_lift, A_coeff
///   [enclose] radius, disc, grid, iterates, steps, slice
///   [degree]  parts
///   [nhim]    C, lambda
struct RunConfig {
    std::string subcommand;
    std::string map = "cap";
    std::string mode = "full";
    std::string scheme = "4,100,50,50";
    std::size_t refine_depth = 10;
    std::size_t max_failures = 16;
    /// Comma-separated member names for sequence mode ("custom" = [map]).
    std::string sequence;
    std::string eta;
    std::string a_coeff;
    std::string report_path;
    std::string cells_path;
    unsigned jobs = 0;
    bool check_endpoint = false;

    std::string ru = "1";
    std::string rs = "1";
    bool mobius_stable = false;

    std::map<std::string, std::string> params{{"mu", "1/10"}};

    std::string custom_name = "custom";
    std::string theta_out, x_out, y_out;
    std::string h_theta, h_x, h_y;
    std::string eta_lift, a_custom;

    std::string enclose_radius = "2";
    bool enclose_disc = true;
    std::string enclose_grid = "16,16,16";
    std::size_t enclose_iterates = 3;
    std::size_t enclose_steps = 2;
    std::string enclose_slice;

    std::size_t degree_parts = 100;

    std::string nhim_c;
    std::string nhim_lambda;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

RunConfig load_config(const std::filesystem::path& path);
RunConfig parse_config(std::istream& in);
void write_config(std::ostream& out, const RunConfig& cfg);

// Resolution of text fields into library objects.
Params resolve_params(const RunConfig& cfg);
DomainSpec resolve_domain(const RunConfig& cfg);
ExpressionMapDefinition resolve_custom(const RunConfig& cfg);
/// Homotopy for a name ("custom" selects the [map] section), with eta and
/// A overrides applied.
HomotopySpec resolve_homotopy(const RunConfig& cfg, const std::string& name);
MapSpec resolve_map(const RunConfig& cfg, const std::string& name);
/// Jobs from the config, else the COVREL_JOBS environment variable, else 1.
unsigned resolve_jobs(const RunConfig& cfg);

} // namespace covrel

#pragma once

#include "scenario.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace dcesim {

/// Exit codes of the command-line tool.
enum ExitCode { Success = 0, ConfigFailure = 2, NumericFailure = 3, IoFailure = 4 };

struct RunReport {
    std::vector<std::string> files; // data files, relative to the output directory
    nlohmann::json summary = nlohmann::json::object();
    bool partial = false;
    std::string error;
};

/// Least-squares slope of y against x over the last half of the samples.
double fit_tail_slope(std::vector<double> const& x, std::vector<double> const& y);

/// Runs the scenario's analysis, writing CSVs and metadata.json into
/// scenario.output_dir. Numeric failures leave partial outputs behind and
/// are recorded in the report rather than thrown.
RunReport run_analysis(Scenario const& scenario);

/// Runs and maps every failure onto an exit code, logging to `log`.
int run_scenario(Scenario const& scenario, std::ostream& log);

} // namespace dcesim

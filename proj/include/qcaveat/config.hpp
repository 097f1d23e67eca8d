#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>

#include "qcaveat/scenarios.hpp"

namespace qcaveat {

enum class OutputFormat { csv, json };

OutputFormat output_format_from_string(const std::string& name);

/// A parsed run configuration. Layout:
///
///   [scenario]
///   name = t_sweep
///   seed = 42
///
///   [parameters]
///   divisors = 1, 2, 4
///
///   [output]
///   path = t_sweep.csv
///   format = csv
///
/// '#' and ';' start comments. Unknown sections or keys are errors.
struct ScenarioConfig {
  std::string scenario;
  std::uint64_t seed = 0;
  std::map<std::string, std::string> raw_parameters;
  ParameterSet parameters;
  std::string output_path;  ///< empty means standard output
  OutputFormat format = OutputFormat::csv;
};

/// Throws ParseError naming the offending field ("section.key" or a line).
ScenarioConfig parse_config(const std::string& text);

/// The smallest config that runs `info` with its defaults.
std::string minimal_config(const ScenarioInfo& info, std::uint64_t seed = 0);

/// CSV writes the bare table; JSON wraps it with the scenario name, seed and
/// resolved parameters.
void write_report(std::ostream& out, const ResultTable& table, const ScenarioConfig& config);

}  // namespace qcaveat

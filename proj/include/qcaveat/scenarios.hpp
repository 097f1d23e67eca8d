#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "qcaveat/table.hpp"

namespace qcaveat {

enum class ParamType { real, integer, real_list, integer_list };

std::string_view to_string(ParamType t);

struct ParamSpec {
  std::string name;
  ParamType type;
  std::string default_value;  ///< in config syntax; lists are comma-separated
  std::string doc;
};

struct ScenarioInfo {
  std::string name;
  std::string summary;
  std::vector<ParamSpec> params;
};

using ParamValue =
    std::variant<double, std::int64_t, std::vector<double>, std::vector<std::int64_t>>;

/// Parses `text` as `spec.type`. Throws ParseError naming the parameter.
ParamValue parse_param(const ParamSpec& spec, const std::string& text);

/// Typed parameter values, complete with defaults.
class ParameterSet {
 public:
  ParameterSet() = default;
  explicit ParameterSet(std::map<std::string, ParamValue> values) : values_(std::move(values)) {}

  double real(const std::string& name) const;
  std::int64_t integer(const std::string& name) const;
  std::vector<double> reals(const std::string& name) const;
  std::vector<std::int64_t> integers(const std::string& name) const;
  const std::map<std::string, ParamValue>& values() const noexcept { return values_; }

 private:
  const ParamValue& at(const std::string& name) const;
  std::map<std::string, ParamValue> values_;
};

/// Every registered scenario, sorted by name.
const std::vector<ScenarioInfo>& scenario_catalog();

/// Throws ParseError("scenario") for unknown names.
const ScenarioInfo& find_scenario(const std::string& name);

/// Fills defaults and parses overrides; unknown keys are a ParseError.
ParameterSet resolve_parameters(const ScenarioInfo& info,
                                const std::map<std::string, std::string>& overrides);

/// Worker cap: QCAVEAT_THREADS if set (>= 1), else the hardware concurrency.
unsigned worker_threads();

/// Runs one scenario. Grid points may run on up to `threads` workers; rows
/// come back in grid order, so the table depends only on (params, seed).
ResultTable run_scenario(const std::string& name, const ParameterSet& params, std::uint64_t seed,
                         unsigned threads = 1);

}  // namespace qcaveat

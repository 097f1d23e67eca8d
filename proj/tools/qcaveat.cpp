// Batch front end: run scenario configs and list the scenario catalog.
//
// Exit codes: 0 success, 1 scenario failure, 2 parse error, 3 precondition
// violation. Failures print one line to stderr:
//   error kind=<parse|precondition|failure> field=<name> message="<text>"

#include <CLI11.hpp>

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "qcaveat/config.hpp"
#include "qcaveat/error.hpp"
#include "qcaveat/io.hpp"
#include "qcaveat/scenarios.hpp"

namespace {

int fail(int code, const std::string& kind, const std::string& field, std::string message) {
  for (char& c : message) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  std::cerr << "error kind=" << kind << " field=" << (field.empty() ? "-" : field) << " message=\""
            << message << "\"\n";
  return code;
}

void print_catalog(std::ostream& out) {
  for (const qcaveat::ScenarioInfo& s : qcaveat::scenario_catalog()) {
    out << s.name << "\n  " << s.summary << "\n";
    for (const qcaveat::ParamSpec& p : s.params) {
      out << "  " << p.name << " (" << qcaveat::to_string(p.type) << ", default " << p.default_value
          << "): " << p.doc << "\n";
    }
  }
}

int run(const std::string& path, std::optional<std::uint64_t> seed, const std::string& out_path,
        const std::string& format) {
  qcaveat::ScenarioConfig config = qcaveat::parse_config(qcaveat::read_file(path));
  if (seed) config.seed = *seed;
  if (!out_path.empty()) config.output_path = out_path;
  if (!format.empty()) config.format = qcaveat::output_format_from_string(format);

  const qcaveat::ResultTable table = qcaveat::run_scenario(
      config.scenario, config.parameters, config.seed, qcaveat::worker_threads());

  std::ostringstream report;
  qcaveat::write_report(report, table, config);
  if (config.output_path.empty() || config.output_path == "-") {
    std::cout << report.str();
    return 0;
  }
  std::ofstream file(config.output_path, std::ios::binary | std::ios::trunc);
  if (!(file << report.str())) {
    return fail(1, "failure", "output.path", "cannot write '" + config.output_path + "'");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Phase estimation and HHL error laboratory"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::string out_path;
  std::string format;
  CLI::App* run_cmd = app.add_subcommand("run", "Run a scenario config and write its report");
  run_cmd->add_option("config", config_path, "Scenario config file")->required();
  run_cmd->add_option("--seed", seed, "Override the config seed");
  run_cmd->add_option("--out", out_path, "Report path ('-' for standard output)");
  run_cmd->add_option("--format", format, "Report format")->check(CLI::IsMember({"csv", "json"}));

  CLI::App* list_cmd = app.add_subcommand("list", "List scenarios and their parameters");

  std::string scenario;
  CLI::App* config_cmd = app.add_subcommand("config", "Print a minimal config for a scenario");
  config_cmd->add_option("scenario", scenario, "Scenario name")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(2, "parse", "arguments", e.what());
  }

  try {
    if (*list_cmd) {
      print_catalog(std::cout);
      return 0;
    }
    if (*config_cmd) {
      std::cout << qcaveat::minimal_config(qcaveat::find_scenario(scenario));
      return 0;
    }
    return run(config_path, seed, out_path, format);
  } catch (const qcaveat::ParseError& e) {
    return fail(2, "parse", e.field(), e.what());
  } catch (const qcaveat::PreconditionError& e) {
    return fail(3, "precondition", "", e.what());
  } catch (const std::exception& e) {
    return fail(1, "failure", "", e.what());
  }
}

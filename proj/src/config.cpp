#include "qcaveat/config.hpp"

#include <charconv>
#include <sstream>

#include "qcaveat/error.hpp"

namespace qcaveat {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::string line_field(std::size_t n) { return "line " + std::to_string(n); }

Json param_to_json(const ParamValue& v) {
  return std::visit([](const auto& x) { return Json(x); }, v);
}

}  // namespace

OutputFormat output_format_from_string(const std::string& name) {
  if (name == "csv") return OutputFormat::csv;
  if (name == "json") return OutputFormat::json;
  throw ParseError("output.format", "output format must be 'csv' or 'json', got '" + name + "'");
}

ScenarioConfig parse_config(const std::string& text) {
  std::map<std::string, std::map<std::string, std::string>> sections;
  std::string section;
  std::istringstream in(text);
  std::string raw;
  std::size_t n = 0;
  while (std::getline(in, raw)) {
    ++n;
    const std::string line = trim(raw);
    if (line.empty() || line.front() == '#' || line.front() == ';') continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_field(n), line_field(n) + ": unterminated section header");
      section = trim(std::string_view(line).substr(1, line.size() - 2));
      if (section != "scenario" && section != "parameters" && section != "output") {
        throw ParseError(section, "unknown section [" + section + "]");
      }
      if (sections.count(section)) throw ParseError(section, "duplicate section [" + section + "]");
      sections[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_field(n), line_field(n) + ": expected 'key = value'");
    if (section.empty()) throw ParseError(line_field(n), line_field(n) + ": key outside any section");
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    const std::string name = section + "." + key;
    if (key.empty()) throw ParseError(line_field(n), line_field(n) + ": empty key");
    if (sections[section].count(key)) throw ParseError(name, "duplicate key '" + name + "'");
    sections[section][key] = value;
  }

  ScenarioConfig config;
  const auto& head = sections["scenario"];
  for (const auto& [key, value] : head) {
    if (key != "name" && key != "seed") throw ParseError("scenario." + key, "unknown key 'scenario." + key + "'");
  }
  const auto name = head.find("name");
  if (name == head.end() || name->second.empty()) {
    throw ParseError("scenario.name", "missing 'name' in [scenario]");
  }
  config.scenario = name->second;
  const ScenarioInfo& info = find_scenario(config.scenario);
  if (const auto seed = head.find("seed"); seed != head.end()) {
    const std::string& s = seed->second;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), config.seed);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
      throw ParseError("scenario.seed", "seed must be an unsigned 64-bit integer, got '" + s + "'");
    }
  }

  config.raw_parameters = sections["parameters"];
  try {
    config.parameters = resolve_parameters(info, config.raw_parameters);
  } catch (const ParseError& e) {
    throw ParseError("parameters." + e.field(), e.what());
  }

  for (const auto& [key, value] : sections["output"]) {
    if (key == "path") {
      config.output_path = value;
    } else if (key == "format") {
      config.format = output_format_from_string(value);
    } else {
      throw ParseError("output." + key, "unknown key 'output." + key + "'");
    }
  }
  return config;
}

std::string minimal_config(const ScenarioInfo& info, std::uint64_t seed) {
  std::ostringstream out;
  out << "[scenario]\nname = " << info.name << "\nseed = " << seed << "\n";
  if (!info.params.empty()) {
    out << "\n[parameters]\n";
    for (const ParamSpec& p : info.params) {
      out << "# " << p.doc << " (" << to_string(p.type) << ")\n" << p.name << " = " << p.default_value << "\n";
    }
  }
  return out.str();
}

void write_report(std::ostream& out, const ResultTable& table, const ScenarioConfig& config) {
  if (config.format == OutputFormat::csv) {
    table.write_csv(out);
    return;
  }
  Json j;
  j["scenario"] = config.scenario;
  j["seed"] = config.seed;
  Json params = Json::object();
  for (const auto& [key, value] : config.parameters.values()) params[key] = param_to_json(value);
  j["parameters"] = std::move(params);
  j["table"] = table.to_json();
  out << j.dump(2) << '\n';
}

}  // namespace qcaveat

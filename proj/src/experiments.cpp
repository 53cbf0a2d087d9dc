#include "mlab/experiments.hpp"

#include "mlab/parallel.hpp"
#include "mlab/schema_text.hpp"
#include "scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <regex>
#include <sstream>

#ifndef MLAB_VERSION
#define MLAB_VERSION "unknown"
#endif

namespace mlab {

using nlohmann::json;

const json& experiment_config_schema() {
  static const json schema = json::parse(detail::kExperimentSchema);
  return schema;
}

namespace {

bool type_matches(const json& v, const std::string& type) {
  if (type == "object") return v.is_object();
  if (type == "array") return v.is_array();
  if (type == "string") return v.is_string();
  if (type == "boolean") return v.is_boolean();
  if (type == "integer") return v.is_number_integer();
  if (type == "number") return v.is_number();
  if (type == "null") return v.is_null();
  return false;
}

void validate_node(const json& v, const json& s, const std::string& path, std::vector<std::string>& errors) {
  const std::string where = path.empty() ? "/" : path;
  if (s.contains("type") && !type_matches(v, s["type"].get<std::string>())) {
    errors.push_back(where + ": expected " + s["type"].get<std::string>());
    return;
  }
  if (s.contains("enum")) {
    bool found = false;
    for (const auto& e : s["enum"]) found = found || e == v;
    if (!found) errors.push_back(where + ": value " + v.dump() + " not in enum");
  }
  if (v.is_number()) {
    const double x = v.get<double>();
    if (s.contains("minimum") && x < s["minimum"].get<double>())
      errors.push_back(where + ": below minimum " + s["minimum"].dump());
    if (s.contains("maximum") && x > s["maximum"].get<double>())
      errors.push_back(where + ": above maximum " + s["maximum"].dump());
    if (s.contains("exclusiveMinimum") && x <= s["exclusiveMinimum"].get<double>())
      errors.push_back(where + ": must exceed " + s["exclusiveMinimum"].dump());
    if (s.contains("exclusiveMaximum") && x >= s["exclusiveMaximum"].get<double>())
      errors.push_back(where + ": must be below " + s["exclusiveMaximum"].dump());
  }
  if (v.is_string() && s.contains("pattern")) {
    if (!std::regex_search(v.get<std::string>(), std::regex(s["pattern"].get<std::string>())))
      errors.push_back(where + ": does not match " + s["pattern"].get<std::string>());
  }
  if (v.is_array()) {
    if (s.contains("minItems") && v.size() < s["minItems"].get<std::size_t>())
      errors.push_back(where + ": fewer than " + s["minItems"].dump() + " items");
    if (s.contains("items"))
      for (std::size_t i = 0; i < v.size(); ++i) validate_node(v[i], s["items"], path + "/" + std::to_string(i), errors);
  }
  if (v.is_object()) {
    if (s.contains("required"))
      for (const auto& key : s["required"])
        if (!v.contains(key.get<std::string>())) errors.push_back(where + ": missing required " + key.get<std::string>());
    const json props = s.value("properties", json::object());
    for (const auto& [key, child] : v.items()) {
      if (props.contains(key)) {
        validate_node(child, props[key], path + "/" + key, errors);
      } else if (s.contains("additionalProperties")) {
        const json& extra = s["additionalProperties"];
        if (extra.is_boolean()) {
          if (!extra.get<bool>()) errors.push_back(where + ": unexpected property " + key);
        } else {
          validate_node(child, extra, path + "/" + key, errors);
        }
      }
    }
  }
}

std::string utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string csv_cell(const json& v) {
  if (!v.is_string()) return v.dump();
  const std::string s = v.get<std::string>();
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::vector<std::string> validate_schema(const json& instance, const json& schema) {
  std::vector<std::string> errors;
  validate_node(instance, schema, "", errors);
  return errors;
}

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  const auto errors = validate_schema(j, experiment_config_schema());
  if (!errors.empty()) {
    std::string msg = "config does not match the schema:";
    for (const auto& e : errors) msg += "\n  " + e;
    throw ConfigError(msg);
  }
  ExperimentConfig c;
  c.raw = j;
  c.name = j["name"].get<std::string>();
  c.scenario = j["scenario"].get<std::string>();
  c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("output")) {
    c.output_directory = j["output"].value("directory", std::string("."));
    c.write_csv = j["output"].value("csv", true);
  }
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j);
}

double ExperimentConfig::threshold(const std::string& key) const {
  const auto v = optional_threshold(key);
  if (!v) throw ConfigError("config " + name + ": missing threshold '" + key + "'");
  return *v;
}

std::optional<double> ExperimentConfig::optional_threshold(const std::string& key) const {
  if (!raw["thresholds"].contains(key)) return std::nullopt;
  return raw["thresholds"][key].get<double>();
}

void Table::add(std::vector<json> row) {
  if (row.size() != columns.size()) throw std::logic_error("table " + name + ": row width mismatch");
  rows.push_back(std::move(row));
}

std::vector<double> Table::column(const std::string& col) const {
  const auto it = std::find(columns.begin(), columns.end(), col);
  if (it == columns.end()) throw std::logic_error("table " + name + ": no column " + col);
  const std::size_t c = static_cast<std::size_t>(it - columns.begin());
  std::vector<double> out;
  for (const auto& r : rows) out.push_back(r[c].get<double>());
  return out;
}

json Table::to_json() const { return {{"columns", columns}, {"rows", rows}}; }

json Verdict::to_json() const {
  json j{{"name", name}, {"measured", measured}, {"source", source}, {"pass", pass}};
  j["lower"] = lower ? json(*lower) : json(nullptr);
  j["upper"] = upper ? json(*upper) : json(nullptr);
  return j;
}

bool ExperimentReport::passed() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

json ExperimentReport::body() const {
  json tabs = json::object();
  for (const auto& t : tables) tabs[t.name] = t.to_json();
  json verd = json::array();
  for (const auto& v : verdicts) verd.push_back(v.to_json());
  return {{"name", config.name},   {"scenario", config.scenario}, {"seed", config.seed},
          {"config", config.raw},  {"tables", tabs},              {"fits", fits},
          {"verdicts", verd},      {"notes", notes},              {"status", passed() ? "pass" : "fail"}};
}

json ExperimentReport::to_json() const {
  return {{"body", body()},
          {"meta",
           {{"wall_seconds", wall_seconds}, {"started_utc", started_utc}, {"version", MLAB_VERSION},
            {"threads", thread_count()}}}};
}

void ExperimentReport::write_csv(std::ostream& out) const {
  out << "table,row,column,value\n";
  for (const auto& t : tables)
    for (std::size_t r = 0; r < t.rows.size(); ++r)
      for (std::size_t c = 0; c < t.columns.size(); ++c)
        out << csv_cell(t.name) << ',' << r << ',' << csv_cell(t.columns[c]) << ',' << csv_cell(t.rows[r][c]) << '\n';
}

std::vector<std::string> scenario_names() {
  std::vector<std::string> out;
  for (const auto& [name, fn] : detail::scenario_registry()) out.push_back(name);
  return out;
}

Deadline::Deadline(std::optional<double> seconds) : start_(std::chrono::steady_clock::now()), seconds_(seconds) {}

double Deadline::elapsed() const {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
}

void Deadline::check(const std::string& where) const {
  if (seconds_ && elapsed() > *seconds_)
    throw BudgetExceeded("time budget of " + std::to_string(*seconds_) + " s exceeded at " + where);
}

namespace detail {

Table& ScenarioContext::table(const std::string& name, std::vector<std::string> columns) {
  report.tables.push_back(Table{name, std::move(columns), {}});
  return report.tables.back();
}

void ScenarioContext::verdict(const std::string& name, double measured, const std::string& source,
                              const std::string& lower_key, const std::string& upper_key) {
  const auto lo = lower_key.empty() ? std::nullopt : config.optional_threshold(lower_key);
  const auto hi = upper_key.empty() ? std::nullopt : config.optional_threshold(upper_key);
  if (!lo && !hi) {
    if (exploratory()) return;
    throw ConfigError("config " + config.name + ": verdict '" + name + "' needs threshold '" +
                      (upper_key.empty() ? lower_key : upper_key) + "'");
  }
  verdict_bounds(name, measured, source, lo, hi);
}

std::optional<double> ScenarioContext::required_threshold(const std::string& key) const {
  if (exploratory()) return std::nullopt;
  return config.threshold(key);
}

void ScenarioContext::verdict_bounds(const std::string& name, double measured, const std::string& source,
                                     std::optional<double> lower, std::optional<double> upper) {
  Verdict v{name, measured, lower, upper, source, std::isfinite(measured)};
  if (lower && measured < *lower) v.pass = false;
  if (upper && measured > *upper) v.pass = false;
  report.verdicts.push_back(v);
}

}  // namespace detail

ExperimentReport run(const ExperimentConfig& config) {
  const auto& registry = detail::scenario_registry();
  const auto it = registry.find(config.scenario);
  if (it == registry.end()) throw ConfigError("unknown scenario " + config.scenario);
  ExperimentReport report;
  report.config = config;
  report.started_utc = utc_now();
  std::optional<double> seconds;
  if (config.has("budget", "max_seconds")) seconds = config.get<double>("budget", "max_seconds", 0.0);
  detail::ScenarioContext ctx{config, report, Deadline(seconds)};
  try {
    it->second(ctx);
  } catch (const BudgetExceeded&) {
    throw;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw std::runtime_error("scenario " + config.scenario + " (" + config.name + "): " + e.what());
  }
  report.wall_seconds = ctx.deadline.elapsed();
  return report;
}

void write_atomically(const std::filesystem::path& path, const std::string& contents) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << contents;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

OutputPaths write_outputs(const ExperimentReport& report) {
  OutputPaths paths;
  const auto& dir = report.config.output_directory;
  paths.report = dir / (report.config.name + ".report.json");
  write_atomically(paths.report, report.to_json().dump(2) + "\n");
  if (report.config.write_csv) {
    paths.csv = dir / (report.config.name + ".tables.csv");
    std::ostringstream csv;
    report.write_csv(csv);
    write_atomically(paths.csv, csv.str());
  }
  return paths;
}

}  // namespace mlab

#pragma once

#include <json.hpp>

#include <chrono>
#include <deque>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mlab {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The published configuration schema (schema/experiment_config.schema.json).
const nlohmann::json& experiment_config_schema();

// Validates against the JSON Schema subset used by the published schema:
// type, enum, required, properties, additionalProperties, items, minItems,
// minimum, maximum, exclusiveMinimum, exclusiveMaximum, pattern.
// Returns one message per violation, prefixed with the JSON pointer.
std::vector<std::string> validate_schema(const nlohmann::json& instance, const nlohmann::json& schema);

struct ExperimentConfig {
  nlohmann::json raw;
  std::string name;
  std::string scenario;
  std::uint64_t seed = 0;
  std::filesystem::path output_directory = ".";
  bool write_csv = true;

  // Throws ConfigError listing every schema violation.
  static ExperimentConfig from_json(const nlohmann::json& j);
  static ExperimentConfig load(const std::filesystem::path& path);

  // Value of section.key, or the fallback when absent.
  template <class T>
  T get(const std::string& section, const std::string& key, T fallback) const {
    if (!raw.contains(section) || !raw[section].contains(key)) return fallback;
    return raw[section][key].get<T>();
  }
  bool has(const std::string& section, const std::string& key) const {
    return raw.contains(section) && raw[section].contains(key);
  }
  // Throws ConfigError when the threshold is missing.
  double threshold(const std::string& key) const;
  std::optional<double> optional_threshold(const std::string& key) const;
};

// Tidy table; cells are numbers, strings or booleans.
struct Table {
  std::string name;
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  void add(std::vector<nlohmann::json> row);
  // All values of one numeric column.
  std::vector<double> column(const std::string& name) const;
  nlohmann::json to_json() const;
};

struct Verdict {
  std::string name;
  double measured = 0.0;
  std::optional<double> lower;  // pass requires measured >= lower
  std::optional<double> upper;  // and measured <= upper
  std::string source;           // table the measurement is computed from
  bool pass = false;
  nlohmann::json to_json() const;
};

struct ExperimentReport {
  ExperimentConfig config;
  std::deque<Table> tables;  // stable references while scenarios append
  nlohmann::json fits = nlohmann::json::object();
  std::vector<Verdict> verdicts;
  std::vector<std::string> notes;
  double wall_seconds = 0.0;
  std::string started_utc;

  bool passed() const;
  // Deterministic part: everything except timing and version stamps.
  nlohmann::json body() const;
  nlohmann::json to_json() const;
  // Rows table,row,column,value.
  void write_csv(std::ostream& out) const;
};

std::vector<std::string> scenario_names();

// Runs the scenario. Scenario errors propagate with the scenario name prefixed.
ExperimentReport run(const ExperimentConfig& config);

struct OutputPaths {
  std::filesystem::path report;
  std::filesystem::path csv;  // empty when disabled
};

// <dir>/<name>.report.json and <dir>/<name>.tables.csv, each written to a
// temporary file and renamed into place.
OutputPaths write_outputs(const ExperimentReport& report);

// Shared by the scenarios: wall-clock budget from budget.max_seconds.
class Deadline {
 public:
  explicit Deadline(std::optional<double> seconds);
  // Throws BudgetExceeded once the budget is spent.
  void check(const std::string& where) const;
  double elapsed() const;

 private:
  std::chrono::steady_clock::time_point start_;
  std::optional<double> seconds_;
};

// Writes contents to path through a temporary file in the same directory.
void write_atomically(const std::filesystem::path& path, const std::string& contents);

}  // namespace mlab

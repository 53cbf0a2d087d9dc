#pragma once

#include "mlab/experiments.hpp"

#include <functional>
#include <map>
#include <string>

namespace mlab::detail {

struct ScenarioContext {
  const ExperimentConfig& config;
  ExperimentReport& report;
  Deadline deadline;

  Table& table(const std::string& name, std::vector<std::string> columns);
  // An empty thresholds object requests tables and fits without verdicts.
  bool exploratory() const { return config.raw["thresholds"].empty(); }
  // Threshold value; nullopt when exploratory, ConfigError when missing otherwise.
  std::optional<double> required_threshold(const std::string& key) const;
  // Adds a verdict with bounds taken from the named thresholds; absent
  // optional keys leave that side open. At least one bound must exist unless
  // the run is exploratory.
  void verdict(const std::string& name, double measured, const std::string& source,
               const std::string& lower_key, const std::string& upper_key);
  void verdict_bounds(const std::string& name, double measured, const std::string& source, std::optional<double> lower,
                      std::optional<double> upper);
};

using ScenarioFn = std::function<void(ScenarioContext&)>;

const std::map<std::string, ScenarioFn>& scenario_registry();

}  // namespace mlab::detail

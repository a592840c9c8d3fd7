#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "hypernorden/catalog.hpp"
#include "hypernorden/theorems.hpp"

namespace hypernorden {

using Json = nlohmann::ordered_json;

/// Parsed scenario file: a list of key = value settings describing the
/// ambient manifold, an optional immersion, the requested checks and the
/// sampling configuration. See docs/scenario-format.md.
struct Scenario {
  std::vector<std::pair<std::string, std::string>> settings;  // file order
  std::string path;  // informational

  bool has(const std::string& key) const;
  std::string get(const std::string& key, const std::string& fallback = "") const;
};

Scenario parse_scenario_text(const std::string& text, std::string path = "<inline>");
Scenario parse_scenario_file(const std::string& path);

/// Command-line overrides applied on top of the scenario settings.
struct RunOptions {
  std::optional<int> points;
  std::optional<double> box;
  std::optional<double> tol_hold;
  std::optional<double> tol_fail;
};

struct RunResult {
  int exit_code = 0;  // 0 hold, 1 fail, 2 indeterminate, 3 config, 4 engine
  Json report;
};

/// Executes the requested checks and assembles the deterministic report.
/// Configuration problems raise ConfigError; engine errors are captured in
/// the report with exit code 4.
RunResult run_scenario(const Scenario& sc, const RunOptions& opt = {});

}  // namespace hypernorden

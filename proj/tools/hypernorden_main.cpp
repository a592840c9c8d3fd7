#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "hypernorden/errors.hpp"
#include "hypernorden/scenario.hpp"
#include "hypernorden/version.hpp"

namespace {

void emit_text(const hypernorden::Json& report, std::ostream& os) {
  os << report["engine"]["name"].get<std::string>() << " "
     << report["engine"]["version"].get<std::string>() << "\n";
  os << "ambient: " << report["ambient"]["label"].get<std::string>() << "\n";
  for (const auto& check : report["checks"]) {
    os << "  [" << check["status"].get<std::string>() << "] "
       << check["name"].get<std::string>() << "\n";
  }
  os << "overall: " << report["summary"]["status"].get<std::string>() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(hypernorden::kEngineName) +
               " - chart-level verification of hypercomplex manifolds with "
               "Hermitian and Norden metrics"};
  app.set_version_flag("--version", hypernorden::kEngineVersion);

  std::string scenario_path;
  app.add_option("scenario", scenario_path, "scenario file to run")->required();

  hypernorden::RunOptions opt;
  int points = 0;
  double box = 0.0, tol_hold = 0.0, tol_fail = 0.0;
  std::string out_path;
  bool json_output = true;
  auto* points_opt = app.add_option("--points", points, "number of Halton sample points");
  auto* box_opt = app.add_option("--box", box, "half-width of the sampling cube");
  auto* hold_opt = app.add_option("--tol-hold", tol_hold, "hold threshold for residuals");
  auto* fail_opt = app.add_option("--tol-fail", tol_fail, "fail threshold for residuals");
  app.add_option("--out", out_path, "write the report to this path instead of stdout");
  app.add_flag("--json,!--no-json", json_output, "emit the JSON report (default on)");

  CLI11_PARSE(app, argc, argv);

  if (*points_opt) opt.points = points;
  if (*box_opt) opt.box = box;
  if (*hold_opt) opt.tol_hold = tol_hold;
  if (*fail_opt) opt.tol_fail = tol_fail;

  try {
    const hypernorden::Scenario sc = hypernorden::parse_scenario_file(scenario_path);
    const hypernorden::RunResult res = hypernorden::run_scenario(sc, opt);

    std::ofstream file;
    std::ostream* os = &std::cout;
    if (!out_path.empty()) {
      file.open(out_path);
      if (!file) {
        std::cerr << "error: cannot open output path '" << out_path << "'\n";
        return 3;
      }
      os = &file;
    }
    if (json_output)
      *os << res.report.dump(2) << "\n";
    else
      emit_text(res.report, *os);
    return res.exit_code;
  } catch (const hypernorden::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return 3;
  } catch (const hypernorden::Error& e) {
    std::cerr << "engine error: " << e.what() << "\n";
    return 4;
  }
}

// Command line front end: kleinweyl <suite|all> --config FILE [overrides]

#include <cstdio>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "kleinweyl/config.hpp"
#include "kleinweyl/error.hpp"
#include "kleinweyl/report.hpp"

namespace hn = kleinweyl::harness;

namespace {

std::vector<double> split_numbers(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string part = text.substr(start, comma == std::string::npos ? comma : comma - start);
    try {
      std::size_t used = 0;
      out.push_back(std::stod(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw kleinweyl::ConfigError(flag + ": \"" + part + "\" is not a number");
    }
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

std::array<double, 2> parse_window(const std::string& text, const std::string& flag) {
  const auto v = split_numbers(text, flag);
  if (v.size() != 2) throw kleinweyl::ConfigError(flag + ": expected a,b");
  if (!(v[0] > 0.0 && v[0] < v[1])) throw kleinweyl::ConfigError(flag + ": need 0 < a < b");
  return {v[0], v[1]};
}

struct Overrides {
  std::string config_path;
  std::string model_kind;
  std::string grid;
  int truncation = 0;
  std::string t_window;
  std::string lambda_window;
  std::string out;
  double tolerance_scale = 0.0;
};

hn::RunConfig make_config(const Overrides& o, const std::vector<std::string>& suites) {
  hn::RunConfig c;
  if (!o.config_path.empty()) {
    c = hn::load_config(o.config_path);
  } else {
    c = hn::parse_config("{\"model\": {\"kind\": \"" + o.model_kind + "\"}}");
  }
  if (!suites.empty()) c.suites = suites;
  if (!o.grid.empty()) {
    std::vector<int> g;
    for (double v : split_numbers(o.grid, "--grid")) {
      if (v != static_cast<int>(v)) throw kleinweyl::ConfigError("--grid: sizes must be integers");
      g.push_back(static_cast<int>(v));
    }
    if (g.size() == 1) g.assign(c.grid.size(), g[0]);
    c.grid = g;
  }
  if (o.truncation != 0) c.truncation = o.truncation;
  if (!o.t_window.empty()) c.t_window = parse_window(o.t_window, "--t-window");
  if (!o.lambda_window.empty()) c.lambda_window = parse_window(o.lambda_window, "--lambda-window");
  if (!o.out.empty()) c.output_dir = o.out;
  if (o.tolerance_scale != 0.0) c.tolerance_scale = o.tolerance_scale;
  hn::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wave-trace coefficients of stationary spacetimes and their spectral verification"};
  app.require_subcommand(1);
  Overrides o;

  const std::vector<std::pair<std::string, std::string>> commands = {
      {"coefficients", "heat and wave-trace coefficients from the formulas"},
      {"spectrum", "eigenvalues of the time-translation generator"},
      {"verify", "heat-trace and Weyl fits of the spectrum against the formulas"},
      {"expansion", "geodesic checks of the diagonal expansions"},
      {"invariance", "time-shear invariance and variation rules"},
      {"all", "every suite"},
  };
  for (const auto& [name, help] : commands) {
    auto* sub = app.add_subcommand(name, help);
    auto* cfg = sub->add_option("--config", o.config_path, "JSON run configuration")
                    ->check(CLI::ExistingFile);
    sub->add_option("--model", o.model_kind, "model kind with default parameters")
        ->excludes(cfg);
    sub->add_option("--grid", o.grid, "grid points per axis, N or N,N");
    sub->add_option("--truncation", o.truncation, "Fourier truncation K of the pencil");
    sub->add_option("--t-window", o.t_window, "heat fit window a,b");
    sub->add_option("--lambda-window", o.lambda_window, "Weyl fit window a,b");
    sub->add_option("--out", o.out, "output directory");
    sub->add_option("--tolerance-scale", o.tolerance_scale, "multiplier applied to all tolerances")
        ->check(CLI::PositiveNumber);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : hn::kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    if (o.config_path.empty() && o.model_kind.empty()) {
      throw kleinweyl::ConfigError("one of --config or --model is required");
    }
    std::vector<std::string> suites;
    if (command == "all") {
      suites = hn::suite_names();
    } else {
      suites = {command};
    }
    const hn::RunConfig config = make_config(o, suites);
    const hn::RunReport report = hn::run_suites(config);
    hn::write_artifacts(report, config.output_dir);
    std::cout << hn::summary_text(report);
    std::cout << "artifacts written to " << config.output_dir << '\n';
    return report.exit_code;
  } catch (const kleinweyl::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return hn::kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return hn::kExitNumerical;
  }
}

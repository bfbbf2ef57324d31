// Command-line front end: sideband-sim <experiment> [--config FILE] [--key value ...] [--out PATH]

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "sideband/config.hpp"
#include "sideband/runner.hpp"

namespace {

// Turns leftover "--key value" / "--key=value" arguments into overrides.
std::vector<sideband::Override> collect_overrides(const std::vector<std::string>& extras) {
  std::vector<sideband::Override> overrides;
  for (std::size_t i = 0; i < extras.size(); ++i) {
    const auto& arg = extras[i];
    if (arg.rfind("--", 0) != 0 || arg.size() == 2) throw sideband::ConfigError("unexpected argument '" + arg + "'");
    auto key = arg.substr(2);
    if (const auto eq = key.find('='); eq != std::string::npos) {
      overrides.emplace_back(key.substr(0, eq), key.substr(eq + 1));
      continue;
    }
    if (i + 1 >= extras.size()) throw sideband::ConfigError("missing value for '--" + key + "'");
    overrides.emplace_back(std::move(key), extras[++i]);
  }
  return overrides;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulate the rf-analyser for optical sideband modes"};
  app.allow_extras();
  std::string experiment;
  std::string config_path;
  std::string out_path;
  bool show_defaults = false;
  app.add_option("experiment", experiment,
                 "sweep-phi | sweep-drive | osa-scan | homodyne-scan | single-photon | distinguish");
  app.add_option("--config", config_path, "key=value configuration file");
  app.add_option("--out", out_path, "output CSV path");
  app.add_flag("--defaults", show_defaults, "print the configuration keys and their defaults");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : sideband::kExitConfigError;
  }

  if (show_defaults) {
    std::cout << sideband::describe_defaults();
    return sideband::kExitOk;
  }

  try {
    std::string text;
    if (!config_path.empty()) {
      std::ifstream file(config_path);
      if (!file) throw sideband::ConfigError("cannot read config file '" + config_path + "'");
      std::ostringstream buffer;
      buffer << file.rdbuf();
      text = buffer.str();
    }
    auto overrides = collect_overrides(app.remaining());
    if (!experiment.empty()) overrides.emplace_back("experiment", experiment);
    if (!out_path.empty()) overrides.emplace_back("out", out_path);
    const auto config = sideband::parse_config(text, overrides);
    return sideband::run(config, std::cout, std::cerr);
  } catch (const sideband::ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return sideband::kExitConfigError;
  }
}

#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sideband/experiments.hpp"

namespace sideband {

enum class Experiment { SweepPhi, SweepDrive, OsaScan, HomodyneScan, SinglePhoton, Distinguish };

std::string_view experiment_name(Experiment e);
std::optional<Experiment> parse_experiment(std::string_view name);

// Which state an osa-scan or homodyne-scan looks at.
enum class Stage { Input, Output };

struct GridSpec {
  double start;
  double stop;
  std::size_t count;

  std::vector<double> values() const { return linspace(start, stop, count); }
};

struct RunConfig {
  Experiment experiment = Experiment::SweepPhi;
  InputSpec input{};
  double theta = kPi / 4.0;
  double phi = 0.0;
  GridSpec phi_grid{0.0, 2.0 * kPi, 33};
  GridSpec drive_grid{0.0, 0.35, 36};
  GridSpec lo_grid{0.0, kPi, 61};
  GridSpec scan_grid{-200e6, 310e6, 5101};
  ImperfectionModel model = ImperfectionModel::nominal();
  OsaParams osa{500e6, 2e6, 0.05};
  DetectionChain chain = DetectionChain::Spectral;
  Stage stage = Stage::Output;
  double omega = 2.0 * kPi * kNominalSidebandHz;  // rad/s
  double carrier_power = 1.0;
  double attenuation = kInputAttenuation;
  double distinguish_threshold = 0.1;
  double peak_threshold = 0.01;  // fraction of the largest sample
  Complex mu{1.0, 0.0};
  Complex nu{0.0, 0.0};
  std::string out;
  std::optional<double> y_clip;

  // Output path, defaulting to "<experiment>.csv".
  std::string output_path() const;
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

using Override = std::pair<std::string, std::string>;

/// Parses key=value lines ('#' starts a comment) followed by overrides, which
/// win over file values. Unknown keys, malformed lines and out-of-range values
/// throw ConfigError naming the line or the key.
RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides = {});

// Documented keys with their defaults, one "key=value  # note" per line.
std::string describe_defaults();

}  // namespace sideband

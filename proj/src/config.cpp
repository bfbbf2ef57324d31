#include "sideband/config.hpp"

#include <charconv>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include "sideband/csv.hpp"

namespace sideband {

namespace {

struct Entry {
  std::string value;
  std::string origin;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

[[noreturn]] void fail(const std::string& key, const Entry& e, const std::string& why) {
  throw ConfigError(key + ": " + why + " (" + e.origin + ")");
}

double to_double(const std::string& key, const Entry& e) {
  double v = 0.0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) fail(key, e, "expected a number, got '" + e.value + "'");
  return v;
}

double in_range(const std::string& key, const Entry& e, double lo, double hi, bool lo_open = false,
                bool hi_open = false) {
  const double v = to_double(key, e);
  const bool below = lo_open ? !(v > lo) : !(v >= lo);
  const bool above = hi_open ? !(v < hi) : !(v <= hi);
  if (below || above) {
    fail(key, e, "value " + e.value + " outside " + (lo_open ? "(" : "[") + format_double(lo) + ", " +
                     format_double(hi) + (hi_open ? ")" : "]"));
  }
  return v;
}

std::size_t to_count(const std::string& key, const Entry& e) {
  std::size_t v = 0;
  const char* begin = e.value.data();
  const char* end = begin + e.value.size();
  const auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc{} || ptr != end) fail(key, e, "expected a non-negative integer, got '" + e.value + "'");
  if (v < 2) fail(key, e, "grid count must be >= 2");
  return v;
}

constexpr double kInf = std::numeric_limits<double>::infinity();

using Setter = std::function<void(RunConfig&, const std::string&, const Entry&)>;

const std::map<std::string, Setter>& setters() {
  static const std::map<std::string, Setter> table = [] {
    std::map<std::string, Setter> t;
    t["experiment"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      const auto ex = parse_experiment(e.value);
      if (!ex) fail(k, e, "unknown experiment '" + e.value + "'");
      c.experiment = *ex;
    };
    t["input_kind"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      for (auto kind : {InputKind::PM, InputKind::LSB, InputKind::USB, InputKind::AM}) {
        if (input_kind_name(kind) == e.value) {
          c.input.kind = kind;
          return;
        }
      }
      fail(k, e, "expected pm, lsb, usb or am");
    };
    t["chain"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (e.value == "spectral") c.chain = DetectionChain::Spectral;
      else if (e.value == "homodyne") c.chain = DetectionChain::Homodyne;
      else fail(k, e, "expected spectral or homodyne");
    };
    t["stage"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (e.value == "input") c.stage = Stage::Input;
      else if (e.value == "output") c.stage = Stage::Output;
      else fail(k, e, "expected input or output");
    };
    t["model"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (e.value == "ideal") c.model = ImperfectionModel::ideal();
      else if (e.value == "nominal") c.model = ImperfectionModel::nominal();
      else fail(k, e, "expected ideal or nominal");
    };
    t["depth"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.input.depth = in_range(k, e, 0.0, kInf); };
    t["theta"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.theta = in_range(k, e, 0.0, kPi / 2.0); };
    t["phi"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.phi = to_double(k, e); };

    auto grid = [&t](const std::string& prefix, GridSpec RunConfig::*member, double lo, double hi) {
      t[prefix + "_start"] = [=](RunConfig& c, const std::string& k, const Entry& e) {
        (c.*member).start = in_range(k, e, lo, hi);
      };
      t[prefix + "_stop"] = [=](RunConfig& c, const std::string& k, const Entry& e) {
        (c.*member).stop = in_range(k, e, lo, hi);
      };
      t[prefix + "_count"] = [=](RunConfig& c, const std::string& k, const Entry& e) {
        (c.*member).count = to_count(k, e);
      };
    };
    grid("phi", &RunConfig::phi_grid, -kInf, kInf);
    grid("drive", &RunConfig::drive_grid, 0.0, kInf);
    grid("lo", &RunConfig::lo_grid, -kInf, kInf);
    grid("scan", &RunConfig::scan_grid, -kInf, kInf);

    t["visibility_umzi"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.model.visibility_umzi = in_range(k, e, 0.0, 1.0); };
    t["visibility_aom"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.model.visibility_aom = in_range(k, e, 0.0, 1.0); };
    t["fringe_scale"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.model.fringe_scale = in_range(k, e, 0.0, 1.0); };
    t["eta_max"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.model.eta_max = in_range(k, e, 0.0, 1.0); };
    t["drive_gain_k"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.model.drive_gain_k = in_range(k, e, 0.0, kInf, true); };
    t["homodyne_efficiency"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.model.homodyne_efficiency = in_range(k, e, 0.0, 1.0, true); };
    t["fsr"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.osa.fsr = in_range(k, e, 0.0, kInf, true); };
    t["linewidth"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.osa.linewidth = in_range(k, e, 0.0, kInf, true); };
    t["mismatch_fraction"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.osa.mismatch_fraction = in_range(k, e, 0.0, 1.0, false, true); };
    t["omega"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.omega = in_range(k, e, 0.0, kInf, true); };
    t["carrier_power"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.carrier_power = in_range(k, e, 0.0, kInf); };
    t["attenuation"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.attenuation = in_range(k, e, 1.0, kInf); };
    t["threshold"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.distinguish_threshold = in_range(k, e, 0.0, 1.0); };
    t["peak_threshold"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.peak_threshold = in_range(k, e, 0.0, 1.0, true, true); };
    t["mu_re"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.mu.real(to_double(k, e)); };
    t["mu_im"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.mu.imag(to_double(k, e)); };
    t["nu_re"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.nu.real(to_double(k, e)); };
    t["nu_im"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.nu.imag(to_double(k, e)); };
    // Shorthand for real amplitudes.
    t["mu"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.mu = to_double(k, e); };
    t["nu"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.nu = to_double(k, e); };
    t["out"] = [](RunConfig& c, const std::string& k, const Entry& e) {
      if (e.value.empty()) fail(k, e, "empty path");
      c.out = e.value;
    };
    t["y_clip"] = [](RunConfig& c, const std::string& k, const Entry& e) { c.y_clip = in_range(k, e, 0.0, kInf, true); };
    return t;
  }();
  return table;
}

void check_grid(const char* name, const GridSpec& g) {
  if (!(g.start < g.stop)) throw ConfigError(std::string(name) + ": grid start must be below stop");
  if (g.count < 2) throw ConfigError(std::string(name) + ": grid count must be >= 2");
}

}  // namespace

std::string_view experiment_name(Experiment e) {
  switch (e) {
    case Experiment::SweepPhi: return "sweep-phi";
    case Experiment::SweepDrive: return "sweep-drive";
    case Experiment::OsaScan: return "osa-scan";
    case Experiment::HomodyneScan: return "homodyne-scan";
    case Experiment::SinglePhoton: return "single-photon";
    case Experiment::Distinguish: return "distinguish";
  }
  return "?";
}

std::optional<Experiment> parse_experiment(std::string_view name) {
  for (auto e : {Experiment::SweepPhi, Experiment::SweepDrive, Experiment::OsaScan, Experiment::HomodyneScan,
                 Experiment::SinglePhoton, Experiment::Distinguish}) {
    if (experiment_name(e) == name) return e;
  }
  return std::nullopt;
}

std::string RunConfig::output_path() const {
  return out.empty() ? std::string(experiment_name(experiment)) + ".csv" : out;
}

RunConfig parse_config(std::string_view text, const std::vector<Override>& overrides) {
  std::map<std::string, Entry> entries;

  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto eol = text.find('\n', pos);
    auto line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
    pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
    ++line_no;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    const std::string origin = "line " + std::to_string(line_no);
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("malformed line, expected key=value (" + origin + ")");
    const std::string key{trim(line.substr(0, eq))};
    if (key.empty()) throw ConfigError("malformed line, empty key (" + origin + ")");
    if (!setters().contains(key)) throw ConfigError("unknown key '" + key + "' (" + origin + ")");
    entries[key] = {std::string(trim(line.substr(eq + 1))), origin};
  }

  for (const auto& [key, value] : overrides) {
    if (!setters().contains(key)) throw ConfigError("unknown key '" + key + "' (command line)");
    entries[key] = {value, "command line"};
  }

  if (!entries.contains("experiment")) throw ConfigError("missing required key 'experiment'");

  RunConfig config;
  // The model preset goes first so individual fields can refine it.
  if (const auto it = entries.find("model"); it != entries.end()) setters().at("model")(config, "model", it->second);
  for (const auto& [key, entry] : entries) {
    if (key != "model") setters().at(key)(config, key, entry);
  }

  check_grid("phi", config.phi_grid);
  check_grid("drive", config.drive_grid);
  check_grid("lo", config.lo_grid);
  check_grid("scan", config.scan_grid);
  if (!(config.osa.linewidth < config.osa.fsr)) throw ConfigError("linewidth: must be below fsr");
  if (config.experiment == Experiment::OsaScan && config.scan_grid.stop - config.scan_grid.start < config.osa.fsr) {
    throw ConfigError("scan_start/scan_stop: scan must cover at least one FSR");
  }
  if (config.experiment == Experiment::SinglePhoton) {
    const double norm = std::norm(config.mu) + std::norm(config.nu);
    if (std::abs(norm - 1.0) > 1e-9) throw ConfigError("mu/nu: |mu|^2 + |nu|^2 must equal 1");
  }
  return config;
}

std::string describe_defaults() {
  const RunConfig d;
  const auto& m = d.model;
  std::ostringstream os;
  os << "experiment=sweep-phi          # sweep-phi | sweep-drive | osa-scan | homodyne-scan | single-photon | distinguish\n"
     << "input_kind=pm                 # pm | lsb | usb | am\n"
     << "depth=" << format_double(d.input.depth) << "                       # sideband amplitude beta\n"
     << "theta=" << format_double(d.theta) << "    # rad, AOM angle in [0, pi/2]\n"
     << "phi=" << format_double(d.phi) << "                         # rad, optical phase at the AOM\n"
     << "phi_start/phi_stop/phi_count=0/" << format_double(d.phi_grid.stop) << "/" << d.phi_grid.count << "\n"
     << "drive_start/drive_stop/drive_count=0/" << format_double(d.drive_grid.stop) << "/" << d.drive_grid.count << "  # W\n"
     << "lo_start/lo_stop/lo_count=0/" << format_double(d.lo_grid.stop) << "/" << d.lo_grid.count << "  # rad\n"
     << "scan_start/scan_stop/scan_count=" << format_double(d.scan_grid.start) << "/" << format_double(d.scan_grid.stop) << "/"
     << d.scan_grid.count << "  # Hz\n"
     << "model=nominal                 # nominal | ideal preset, applied before other keys\n"
     << "visibility_umzi=" << format_double(m.visibility_umzi) << "\n"
     << "visibility_aom=" << format_double(m.visibility_aom) << "\n"
     << "fringe_scale=" << format_double(m.fringe_scale) << "\n"
     << "eta_max=" << format_double(m.eta_max) << "\n"
     << "drive_gain_k=" << format_double(m.drive_gain_k) << "  # rad/sqrt(W)\n"
     << "homodyne_efficiency=" << format_double(m.homodyne_efficiency) << "\n"
     << "chain=spectral                # spectral | homodyne\n"
     << "stage=output                  # input | output (osa-scan, homodyne-scan)\n"
     << "fsr=" << format_double(d.osa.fsr) << "  # Hz\n"
     << "linewidth=" << format_double(d.osa.linewidth) << "  # Hz\n"
     << "mismatch_fraction=" << format_double(d.osa.mismatch_fraction) << "\n"
     << "omega=" << format_double(d.omega) << "  # rad/s\n"
     << "carrier_power=" << format_double(d.carrier_power) << "\n"
     << "attenuation=" << format_double(d.attenuation) << "\n"
     << "threshold=" << format_double(d.distinguish_threshold) << "\n"
     << "peak_threshold=" << format_double(d.peak_threshold) << "\n"
     << "mu_re/mu_im/nu_re/nu_im=1/0/0/0  # single-photon amplitudes (mu at -Omega)\n"
     << "out=<experiment>.csv\n"
     << "y_clip=<none>\n";
  return os.str();
}

}  // namespace sideband

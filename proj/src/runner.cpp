#include "sideband/runner.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "sideband/csv.hpp"

namespace sideband {

namespace {

class InvariantViolation : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Summary numbers: 12 significant digits, round-off below 1e-14 shown as 0.
std::string num(double v) {
  if (std::abs(v) < 1e-14) v = 0.0;
  std::array<char, 32> buffer{};
  std::snprintf(buffer.data(), buffer.size(), "%.12g", v);
  return buffer.data();
}

std::string complex_text(Complex z) { return "(" + num(z.real()) + ", " + num(z.imag()) + ")"; }

void check_unitary(const ModeUnitary& U) {
  const double defect = U.unitarity_defect();
  if (defect > kUnitarityTolerance) {
    throw InvariantViolation("unitarity defect " + format_double(defect) + " exceeds tolerance");
  }
}

void check_ratios(const Trace& t) {
  for (double y : t.y) {
    if (!(y >= 0.0 && y <= 1.0)) throw InvariantViolation("ratio " + format_double(y) + " outside [0, 1]");
  }
}

void write_trace(const std::string& path, const Trace& t, std::optional<double> y_clip) {
  std::ostringstream buffer;
  write_csv(buffer, t, y_clip);
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw std::ios_base::failure("cannot open '" + path + "' for writing");
  file << buffer.str();
  file.close();
  if (!file) throw std::ios_base::failure("failed writing '" + path + "'");
}

// "dir/base.csv" -> "dir/base_suffix.csv"
std::string suffixed(const std::string& path, std::string_view suffix) {
  std::filesystem::path p(path);
  auto stem = p.stem().string();
  auto ext = p.has_extension() ? p.extension().string() : std::string(".csv");
  return (p.parent_path() / (stem + "_" + std::string(suffix) + ext)).string();
}

CoherentSidebandState analysed_state(const RunConfig& c, const ModeBasket& basket, bool with_light_carrier) {
  auto state = prepare_input(c.input, basket);
  if (with_light_carrier) state = with_carrier(state, PortId::In, std::sqrt(c.carrier_power));
  if (c.stage == Stage::Input) return state;
  const auto U = analyser_unitary(c.theta, c.phi, basket);
  check_unitary(U);
  return apply_unitary(U, state);
}

void run_sweep_phi(const RunConfig& c, std::ostream& summary) {
  check_unitary(analyser_unitary(kPi / 4.0, c.phi_grid.start, basket_standard()));
  const auto grid = c.phi_grid.values();
  const auto t = sweep_phi(c.input, grid, c.model, c.chain);
  check_ratios(t);
  write_trace(c.output_path(), t, c.y_clip);
  summary << "chain: " << (c.chain == DetectionChain::Spectral ? "spectral" : "homodyne") << "\n"
          << "ratio_max: " << num(t.max_y()) << "\n"
          << "ratio_min: " << num(t.min_y()) << "\n"
          << "fringe_visibility: " << num(fringe_visibility(t)) << "\n"
          << "error_bar: " << t.metadata.at("error_bar") << "\n";
}

void run_sweep_drive(const RunConfig& c, std::ostream& summary) {
  const auto grid = c.drive_grid.values();
  const auto t = sweep_drive(c.input, grid, c.model, c.chain);
  check_ratios(t);
  write_trace(c.output_path(), t, c.y_clip);
  summary << "ratio_at_first_drive: " << num(t.y.front()) << "\n"
          << "ratio_at_last_drive: " << num(t.y.back()) << "\n"
          << "ratio_max: " << num(t.max_y()) << "\n"
          << "ratio_min: " << num(t.min_y()) << "\n"
          << "theta_eff_at_last_drive_rad: " << num(theta_from_drive(grid.back(), c.model)) << "\n";
}

void run_osa_scan(const RunConfig& c, std::ostream& summary) {
  const auto basket = basket_standard();
  const auto state = analysed_state(c, basket, true);
  const PortId port = c.stage == Stage::Input ? PortId::In : PortId::Out1;
  const auto t = osa_scan(state, 0.0, port, c.osa, {c.scan_grid.start, c.scan_grid.stop, c.scan_grid.count},
                          c.omega / (2.0 * kPi));
  write_trace(c.output_path(), t, c.y_clip);
  const auto peaks = find_peaks(t, c.peak_threshold * t.max_y());
  summary << "port: " << port_name(port) << "\n"
          << "peaks: " << peaks.size() << "\n";
  for (const auto& p : peaks) {
    summary << "  frequency_hz=" << num(p.x) << " power=" << num(p.y) << "\n";
  }
}

void run_homodyne_scan(const RunConfig& c, std::ostream& summary) {
  const auto basket = basket_standard();
  auto state = analysed_state(c, basket, false);
  PortId port = PortId::Out1;
  if (c.stage == Stage::Input) {
    state = attenuate_state(state, c.attenuation);
    port = PortId::In;
  }
  const auto grid = c.lo_grid.values();
  const auto t = homodyne_scan(state, port, {c.model.homodyne_efficiency, 0.0}, grid);
  for (double db : t.y) {
    if (db < -1e-9) throw InvariantViolation("variance " + format_double(db) + " dB below the QNL");
  }
  write_trace(c.output_path(), t, c.y_clip);
  summary << "port: " << port_name(port) << "\n"
          << "variance_db_max: " << num(t.max_y()) << "\n"
          << "variance_db_min: " << num(t.min_y()) << "\n"
          << "flatness_db: " << num(t.max_y() - t.min_y()) << "\n";
}

void run_single_photon(const RunConfig& c, std::ostream& summary) {
  const double norm = std::sqrt(std::norm(c.mu) + std::norm(c.nu));
  const auto psi = single_photon(c.mu / norm, c.nu / norm);
  check_unitary(analyser_unitary(c.theta, c.phi, psi.basket()));
  const auto out = single_photon_transform(psi, c.theta, c.phi);
  summary << "amplitude_out1_plus: " << complex_text(out.amplitude({PortId::Out1, +1})) << "\n"
          << "amplitude_out2_minus: " << complex_text(out.amplitude({PortId::Out2, -1})) << "\n"
          << "norm: " << num(out.norm()) << "\n";
}

void run_distinguish(const RunConfig& c, std::ostream& summary) {
  const auto grid = c.drive_grid.values();
  const auto report = distinguish_inputs(grid, c.model, c.distinguish_threshold);
  constexpr std::array<std::string_view, 3> names{"pm", "lsb", "usb"};
  for (std::size_t i = 0; i < names.size(); ++i) {
    check_ratios(report.traces[i]);
    write_trace(suffixed(c.output_path(), names[i]), report.traces[i], c.y_clip);
  }
  summary << "distance_pm_lsb: " << num(report.pm_lsb) << "\n"
          << "distance_pm_usb: " << num(report.pm_usb) << "\n"
          << "distance_lsb_usb: " << num(report.lsb_usb) << "\n"
          << "threshold: " << num(report.threshold) << "\n"
          << "distinguishable: " << (report.distinguishable ? "yes" : "no") << "\n";
}

}  // namespace

int run(const RunConfig& config, std::ostream& summary, std::ostream& errors) {
  std::ostringstream body;
  try {
    config.model.validate();
    config.osa.validate();
    body << "experiment: " << experiment_name(config.experiment) << "\n"
         << "input_kind: " << input_kind_name(config.input.kind) << "\n";
    switch (config.experiment) {
      case Experiment::SweepPhi: run_sweep_phi(config, body); break;
      case Experiment::SweepDrive: run_sweep_drive(config, body); break;
      case Experiment::OsaScan: run_osa_scan(config, body); break;
      case Experiment::HomodyneScan: run_homodyne_scan(config, body); break;
      case Experiment::SinglePhoton: run_single_photon(config, body); break;
      case Experiment::Distinguish: run_distinguish(config, body); break;
    }
  } catch (const InvariantViolation& e) {
    errors << "numerical invariant violated: " << e.what() << "\n";
    return kExitInvariantViolation;
  } catch (const std::ios_base::failure& e) {
    errors << "output error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::invalid_argument& e) {
    errors << "configuration error: " << e.what() << "\n";
    return kExitConfigError;
  } catch (const std::domain_error& e) {
    errors << "numerical invariant violated: " << e.what() << "\n";
    return kExitInvariantViolation;
  }
  summary << body.str();
  return kExitOk;
}

}  // namespace sideband

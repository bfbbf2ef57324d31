#include "sideband/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sideband {

namespace {

constexpr double kPhysicalTolerance = 1e-9;
// Cavity resonance orders summed on either side of the scan.
constexpr int kFsrImages = 2;

void require_physical(double variance, const char* where) {
  if (variance < 1.0 - kPhysicalTolerance) {
    throw std::domain_error(std::string(where) + ": variance below the quantum noise limit");
  }
}

}  // namespace

void OsaParams::validate() const {
  if (!(linewidth > 0.0 && linewidth < fsr)) throw std::invalid_argument("OsaParams: need 0 < linewidth < fsr");
  if (!(mismatch_fraction >= 0.0 && mismatch_fraction < 1.0)) {
    throw std::invalid_argument("OsaParams: mismatch_fraction must lie in [0, 1)");
  }
}

void HomodyneParams::validate() const {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw std::invalid_argument("HomodyneParams: efficiency must lie in (0, 1]");
  if (!std::isfinite(lo_phase)) throw std::invalid_argument("HomodyneParams: non-finite LO phase");
}

Trace::Trace(std::vector<double> x_values, std::vector<double> y_values, std::string x_name, std::string y_name)
    : x(std::move(x_values)), y(std::move(y_values)), x_label(std::move(x_name)), y_label(std::move(y_name)) {
  if (x.size() != y.size()) throw std::invalid_argument("Trace: x and y lengths differ");
  for (std::size_t i = 1; i < x.size(); ++i) {
    if (!(x[i] > x[i - 1])) throw std::invalid_argument("Trace: x must be strictly increasing");
  }
}

double Trace::max_y() const {
  if (y.empty()) throw std::logic_error("Trace: empty");
  return *std::max_element(y.begin(), y.end());
}

double Trace::min_y() const {
  if (y.empty()) throw std::logic_error("Trace: empty");
  return *std::min_element(y.begin(), y.end());
}

double lorentzian(double detuning, double fwhm) {
  const double u = 2.0 * detuning / fwhm;
  return 1.0 / (1.0 + u * u);
}

Trace osa_scan(const CoherentSidebandState& s, double carrier_power, PortId port, const OsaParams& p,
               const ScanRange& scan, double sideband_hz) {
  p.validate();
  if (scan.count < 2 || !(scan.stop > scan.start)) throw std::invalid_argument("osa_scan: empty scan");
  if (scan.stop - scan.start < p.fsr) throw std::invalid_argument("osa_scan: scan must cover at least one FSR");
  if (!(carrier_power >= 0.0)) throw std::invalid_argument("osa_scan: negative carrier power");

  struct Line {
    double frequency;
    double power;
  };
  std::vector<Line> lines;
  const auto& basket = s.basket();
  for (int k = -basket.max_offset(); k <= basket.max_offset(); ++k) {
    double power = sideband_power(s, {port, k});
    if (k == 0) power += carrier_power;
    if (power > 0.0) lines.push_back({k * sideband_hz, power});
  }

  std::vector<double> x(scan.count);
  std::vector<double> y(scan.count, 0.0);
  const double step = (scan.stop - scan.start) / static_cast<double>(scan.count - 1);
  for (std::size_t i = 0; i < scan.count; ++i) {
    const double nu = scan.start + step * static_cast<double>(i);
    x[i] = nu;
    double total = 0.0;
    for (const auto& line : lines) {
      for (int order = -kFsrImages; order <= kFsrImages; ++order) {
        const double centre = line.frequency + order * p.fsr;
        total += line.power * lorentzian(nu - centre, p.linewidth);
        total += p.mismatch_fraction * line.power * lorentzian(nu - centre - 0.5 * p.fsr, p.linewidth);
      }
    }
    y[i] = total;
  }
  return {std::move(x), std::move(y), "frequency_hz", "power"};
}

std::vector<Peak> find_peaks(const Trace& t, double min_height) {
  std::vector<Peak> peaks;
  for (std::size_t i = 1; i + 1 < t.size(); ++i) {
    if (t.y[i] >= min_height && t.y[i] > t.y[i - 1] && t.y[i] >= t.y[i + 1]) peaks.push_back({t.x[i], t.y[i]});
  }
  return peaks;
}

double detect_variance(double ideal, double efficiency) { return efficiency * ideal + (1.0 - efficiency); }

double undo_efficiency(double detected, double efficiency) {
  if (!(efficiency > 0.0 && efficiency <= 1.0)) throw std::invalid_argument("undo_efficiency: efficiency must lie in (0, 1]");
  return (detected - (1.0 - efficiency)) / efficiency;
}

double homodyne_variance(const CoherentSidebandState& s, PortId port, const HomodyneParams& p) {
  p.validate();
  const auto means = quadrature_means(s, port);
  const auto noise = port_noise(s, port);
  const double c = std::cos(p.lo_phase);
  const double sn = std::sin(p.lo_phase);
  const double ideal = noise.plus * c * c + noise.minus * sn * sn + std::norm(means.plus * c + means.minus * sn);
  return detect_variance(ideal, p.efficiency);
}

Trace homodyne_scan(const CoherentSidebandState& s, PortId port, const HomodyneParams& p,
                    std::span<const double> lo_phases) {
  if (lo_phases.empty()) throw std::invalid_argument("homodyne_scan: empty phase list");
  std::vector<double> x(lo_phases.begin(), lo_phases.end());
  std::vector<double> y;
  y.reserve(x.size());
  auto at_phase = p;
  for (double phase : x) {
    at_phase.lo_phase = phase;
    y.push_back(10.0 * std::log10(homodyne_variance(s, port, at_phase)));
  }
  return {std::move(x), std::move(y), "lo_phase_rad", "variance_db"};
}

double attenuate_variance(double variance, double attenuation) {
  if (!(attenuation >= 1.0)) throw std::invalid_argument("attenuate_variance: attenuation must be >= 1");
  return variance / attenuation + (1.0 - 1.0 / attenuation);
}

double infer_input_variance(double v_detected, double attenuation) {
  if (!(attenuation >= 1.0)) throw std::invalid_argument("infer_input_variance: attenuation must be >= 1");
  if (v_detected < 1.0 - 1e-12) throw std::domain_error("infer_input_variance: detected variance below the QNL");
  const double v = attenuation * v_detected - (attenuation - 1.0);
  require_physical(v, "infer_input_variance");
  return v;
}

double photon_number_from_scan(double s_plus_detected, double s_minus_detected, const HomodyneParams& p,
                               double attenuation) {
  p.validate();
  const double plus = undo_efficiency(s_plus_detected, p.efficiency);
  const double minus = undo_efficiency(s_minus_detected, p.efficiency);
  require_physical(plus, "photon_number_from_scan");
  require_physical(minus, "photon_number_from_scan");
  return photon_number(infer_input_variance(std::max(plus, 1.0), attenuation),
                       infer_input_variance(std::max(minus, 1.0), attenuation));
}

}  // namespace sideband

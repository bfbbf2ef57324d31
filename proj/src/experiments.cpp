#include "sideband/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace sideband {

namespace {

void require_unit_interval(double v, const char* name) {
  if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument(std::string("ImperfectionModel: ") + name + " must lie in [0, 1]");
}

// Spectral ratio plus the propagated output state, whose Out1(+1) amplitude
// carries the fringe-scaled power.
struct Response {
  double ratio;
  CoherentSidebandState output;
};

Response propagate(const InputSpec& input, double theta, double phi, const ImperfectionModel& m) {
  const auto basket = basket_standard();
  const auto in_state = prepare_input(input, basket);
  const double p_in = total_sideband_power(in_state, PortId::In);
  if (!(p_in > 0.0)) throw std::invalid_argument("response_ratio: input has no sideband power");

  const auto U = analyser_unitary(theta, phi, basket);
  const auto out_state = apply_unitary(U, in_state);

  const ModeId target{PortId::Out1, +1};
  const Complex direct = U.entry(target, {PortId::In, +1}) * in_state.amplitude({PortId::In, +1});
  const Complex swapped = U.entry(target, {PortId::In, -1}) * in_state.amplitude({PortId::In, -1});
  const double full = sideband_power(out_state, target);
  const double cross = 2.0 * std::real(direct * std::conj(swapped));
  const double p_out = std::max(0.0, full - (1.0 - m.fringe_scale) * cross);

  const Complex amplitude = std::polar(std::sqrt(p_out), std::arg(out_state.amplitude(target)));
  // A passive device cannot route more than the input power; clamp round-off.
  return {std::min(1.0, p_out / p_in), out_state.with_amplitude(target, amplitude)};
}

InputSpec single_kind(InputKind kind) { return {kind, 1.0}; }

}  // namespace

ImperfectionModel ImperfectionModel::ideal() {
  ImperfectionModel m;
  m.visibility_umzi = 1.0;
  m.visibility_aom = 1.0;
  m.fringe_scale = 1.0;
  m.eta_max = 1.0;
  m.homodyne_efficiency = 1.0;
  return m;
}

void ImperfectionModel::validate() const {
  require_unit_interval(visibility_umzi, "visibility_umzi");
  require_unit_interval(visibility_aom, "visibility_aom");
  require_unit_interval(fringe_scale, "fringe_scale");
  require_unit_interval(eta_max, "eta_max");
  if (!(homodyne_efficiency > 0.0 && homodyne_efficiency <= 1.0)) {
    throw std::invalid_argument("ImperfectionModel: homodyne_efficiency must lie in (0, 1]");
  }
  if (!(drive_gain_k > 0.0 && std::isfinite(drive_gain_k))) {
    throw std::invalid_argument("ImperfectionModel: drive_gain_k must be positive");
  }
}

std::string_view input_kind_name(InputKind kind) {
  switch (kind) {
    case InputKind::PM: return "pm";
    case InputKind::LSB: return "lsb";
    case InputKind::USB: return "usb";
    case InputKind::AM: return "am";
  }
  return "?";
}

CoherentSidebandState prepare_input(const InputSpec& input, const ModeBasket& basket) {
  switch (input.kind) {
    case InputKind::PM: return pm_state(input.depth, PortId::In, basket);
    case InputKind::AM: return am_state(input.depth, PortId::In, basket);
    case InputKind::LSB: return ssb_prep(pm_state(input.depth, PortId::In, basket), kPrepOmegaTau, -1);
    case InputKind::USB: return ssb_prep(pm_state(input.depth, PortId::In, basket), kPrepOmegaTau, +1);
  }
  throw std::invalid_argument("prepare_input: unknown input kind");
}

double theta_from_drive(double p_drive, const ImperfectionModel& m) {
  if (!(p_drive >= 0.0)) throw std::invalid_argument("theta_from_drive: drive power must be non-negative");
  const double theta_rf = m.drive_gain_k * std::sqrt(p_drive);
  const double s = std::sin(theta_rf);
  const double efficiency = std::clamp(m.eta_max * s * s, 0.0, 1.0);
  return std::asin(std::sqrt(efficiency));
}

double drive_for_theta(double theta, const ImperfectionModel& m) {
  const double root = theta / m.drive_gain_k;
  return root * root;
}

double response_ratio(const InputSpec& input, double theta, double phi, const ImperfectionModel& m,
                      DetectionChain chain) {
  m.validate();
  auto response = propagate(input, theta, phi, m);
  if (chain == DetectionChain::Spectral) return response.ratio;

  const HomodyneParams detector{m.homodyne_efficiency, 0.0};
  const auto in_state = prepare_input(input);
  const auto in_ideal = measured_variances(in_state, PortId::In);
  const double in_plus = detect_variance(attenuate_variance(in_ideal.plus, kInputAttenuation), detector.efficiency);
  const double in_minus = detect_variance(attenuate_variance(in_ideal.minus, kInputAttenuation), detector.efficiency);
  const double n_in = photon_number_from_scan(in_plus, in_minus, detector, kInputAttenuation);

  const auto out_ideal = measured_variances(response.output, PortId::Out1);
  const double n_out = photon_number(detect_variance(out_ideal.plus, detector.efficiency),
                                     detect_variance(out_ideal.minus, detector.efficiency));
  return std::min(1.0, n_out / n_in);
}

Trace sweep_phi(const InputSpec& input, std::span<const double> phi_grid, const ImperfectionModel& m,
                DetectionChain chain) {
  if (phi_grid.empty()) throw std::invalid_argument("sweep_phi: empty grid");
  std::vector<double> y;
  y.reserve(phi_grid.size());
  for (double phi : phi_grid) y.push_back(response_ratio(input, kPi / 4.0, phi, m, chain));
  Trace t({phi_grid.begin(), phi_grid.end()}, std::move(y), "phi_rad", "ratio");
  t.metadata["theta_rad"] = "pi/4";
  t.metadata["error_bar"] = chain == DetectionChain::Spectral ? "0.005 absolute" : "12% of value";
  return t;
}

Trace sweep_drive(const InputSpec& input, std::span<const double> drive_grid, const ImperfectionModel& m,
                  DetectionChain chain) {
  if (drive_grid.empty()) throw std::invalid_argument("sweep_drive: empty grid");
  std::vector<double> y;
  y.reserve(drive_grid.size());
  for (double p : drive_grid) y.push_back(response_ratio(input, theta_from_drive(p, m), 0.0, m, chain));
  Trace t({drive_grid.begin(), drive_grid.end()}, std::move(y), "drive_w", "ratio");
  t.metadata["phi_rad"] = "0";
  t.metadata["error_bar"] = chain == DetectionChain::Spectral ? "0.005 absolute" : "12% of value";
  return t;
}

double fringe_visibility(const Trace& t) {
  const double hi = t.max_y();
  const double lo = t.min_y();
  if (hi + lo == 0.0) throw std::domain_error("fringe_visibility: max + min is zero");
  return (hi - lo) / (hi + lo);
}

double linf_distance(const Trace& a, const Trace& b) {
  if (a.x != b.x) throw std::invalid_argument("linf_distance: traces sampled on different grids");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, std::abs(a.y[i] - b.y[i]));
  return d;
}

DistinguishReport distinguish_inputs(std::span<const double> drive_grid, const ImperfectionModel& m,
                                     double threshold) {
  if (drive_grid.size() < 5) throw std::invalid_argument("distinguish_inputs: need at least 5 drive points");
  auto pm = sweep_drive(single_kind(InputKind::PM), drive_grid, m);
  auto lsb = sweep_drive(single_kind(InputKind::LSB), drive_grid, m);
  auto usb = sweep_drive(single_kind(InputKind::USB), drive_grid, m);
  DistinguishReport report{{pm, lsb, usb}, linf_distance(pm, lsb), linf_distance(pm, usb), linf_distance(lsb, usb),
                           threshold, false};
  report.distinguishable =
      report.pm_lsb > threshold && report.pm_usb > threshold && report.lsb_usb > threshold;
  return report;
}

std::vector<double> linspace(double start, double stop, std::size_t count) {
  if (count < 2) throw std::invalid_argument("linspace: need at least two points");
  std::vector<double> v(count);
  const double step = (stop - start) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) v[i] = start + step * static_cast<double>(i);
  v.back() = stop;
  return v;
}

}  // namespace sideband

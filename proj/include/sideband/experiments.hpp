#pragma once

#include <array>
#include <cmath>
#include <span>
#include <string_view>

#include "sideband/measurement.hpp"

namespace sideband {

inline constexpr double kPrepOmegaTau = 1.33;      // rad, state-preparation UMZI
inline constexpr double kInputAttenuation = 4.0;   // attenuation before the input homodyne
// theta_rf reaches pi/2 at 0.35 W of drive.
inline const double kDefaultDriveGain = (kPi / 2.0) / std::sqrt(0.35);

/// Device imperfections. Only fringe_scale, eta_max and homodyne_efficiency
/// enter the physics; the two component visibilities are carried as metadata.
struct ImperfectionModel {
  double visibility_umzi = 0.98;
  double visibility_aom = 0.88;
  double fringe_scale = 0.97;
  double eta_max = 0.85;
  double drive_gain_k = kDefaultDriveGain;  // rad / sqrt(W)
  double homodyne_efficiency = 0.95;

  static ImperfectionModel ideal();
  static ImperfectionModel nominal() { return {}; }
  void validate() const;
};

enum class InputKind { PM, LSB, USB, AM };

std::string_view input_kind_name(InputKind kind);

struct InputSpec {
  InputKind kind = InputKind::PM;
  double depth = 1.0;  // modulation amplitude beta
};

enum class DetectionChain { Spectral, Homodyne };

// LSB/USB pass a PM field through ssb_prep with Omega tau = 1.33 rad.
CoherentSidebandState prepare_input(const InputSpec& input, const ModeBasket& basket = basket_standard());

// Effective AOM angle: sin^2(theta_eff) = eta_max * sin^2(k sqrt(p)), theta_eff in [0, pi/2].
double theta_from_drive(double p_drive, const ImperfectionModel& m);

// P_{+Omega,out1} / P_{Omega,in}, with the interference term of the analysed
// sideband pair scaled by fringe_scale. The homodyne chain reports the ratio of
// photon numbers from detected variances; the output is read at the detector
// efficiency while the input reference is fully corrected.
double response_ratio(const InputSpec& input, double theta, double phi, const ImperfectionModel& m,
                      DetectionChain chain = DetectionChain::Spectral);

// Response at theta = pi/4 across the phase grid.
Trace sweep_phi(const InputSpec& input, std::span<const double> phi_grid, const ImperfectionModel& m,
                DetectionChain chain = DetectionChain::Spectral);

// Response at phi = 0 across AOM drive powers (W).
Trace sweep_drive(const InputSpec& input, std::span<const double> drive_grid, const ImperfectionModel& m,
                  DetectionChain chain = DetectionChain::Spectral);

double fringe_visibility(const Trace& t);

double linf_distance(const Trace& a, const Trace& b);

struct DistinguishReport {
  // PM, LSB, USB
  std::array<Trace, 3> traces;
  double pm_lsb;
  double pm_usb;
  double lsb_usb;
  double threshold;
  bool distinguishable;
};

DistinguishReport distinguish_inputs(std::span<const double> drive_grid, const ImperfectionModel& m,
                                     double threshold = 0.1);

// Drive power at which theta_rf = theta.
double drive_for_theta(double theta, const ImperfectionModel& m);

std::vector<double> linspace(double start, double stop, std::size_t count);

}  // namespace sideband

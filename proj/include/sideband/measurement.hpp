#pragma once

#include <map>
#include <span>
#include <string>
#include <vector>

#include "sideband/states.hpp"

namespace sideband {

inline constexpr double kNominalSidebandHz = 90.5e6;

// Scanning confocal Fabry-Perot cavity used as an optical spectrum analyser.
struct OsaParams {
  double fsr = 500e6;        // Hz
  double linewidth = 2e6;    // Hz, FWHM
  double mismatch_fraction = 0.0;

  void validate() const;
};

struct HomodyneParams {
  double efficiency = 0.95;
  double lo_phase = 0.0;  // rad

  void validate() const;
};

/// Sampled output of a scan or sweep. x is strictly increasing.
struct Trace {
  Trace(std::vector<double> x, std::vector<double> y, std::string x_label, std::string y_label);

  std::vector<double> x;
  std::vector<double> y;
  std::string x_label;
  std::string y_label;
  // Free-form annotations (error bars, parameters) for the summary.
  std::map<std::string, std::string> metadata;

  std::size_t size() const noexcept { return x.size(); }
  double max_y() const;
  double min_y() const;
};

struct ScanRange {
  double start;  // Hz
  double stop;   // Hz
  std::size_t count;
};

// Unit-peak Lorentzian of the given FWHM.
double lorentzian(double detuning, double fwhm);

// Transmitted power of the OSA while scanning: every mode on `port` with
// nonzero power, plus an extra carrier line of `carrier_power`, contributes a
// Lorentzian (with +-FSR images) and a mismatch copy shifted by FSR/2.
Trace osa_scan(const CoherentSidebandState& s, double carrier_power, PortId port, const OsaParams& p,
               const ScanRange& scan, double sideband_hz = kNominalSidebandHz);

struct Peak {
  double x;
  double y;
};

// Interior local maxima with y >= min_height, in ascending x.
std::vector<Peak> find_peaks(const Trace& t, double min_height);

// Detected quadrature variance at the LO phase in `p`.
double homodyne_variance(const CoherentSidebandState& s, PortId port, const HomodyneParams& p);

// 10 log10 of the detected variance per LO phase (dB relative to the QNL).
Trace homodyne_scan(const CoherentSidebandState& s, PortId port, const HomodyneParams& p,
                    std::span<const double> lo_phases);

// Detector loss: eta V + (1 - eta), and its inverse.
double detect_variance(double ideal, double efficiency);
double undo_efficiency(double detected, double efficiency);

// Attenuation by a factor g: V / g + (1 - 1/g).
double attenuate_variance(double variance, double attenuation);
// Inverse of attenuate_variance: g V_det - (g - 1).
double infer_input_variance(double v_detected, double attenuation);

// Source photon number from detected S+/S- after undoing efficiency and attenuation.
double photon_number_from_scan(double s_plus_detected, double s_minus_detected, const HomodyneParams& p,
                               double attenuation);

}  // namespace sideband

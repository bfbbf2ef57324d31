#pragma once

#include <vector>

#include "sideband/optics.hpp"

namespace sideband {

// Quadrature noise variances of one mode, normalised so the quantum noise limit is 1.
struct QuadratureNoise {
  double plus = 1.0;
  double minus = 1.0;
};

/// Coherent amplitudes on top of (at least) vacuum noise in every mode of a basket.
///
/// Amplitudes are normalised so that |alpha|^2 is twice the sideband photon
/// flux; with that choice n = (S+ + S- - 2) / 4 holds exactly. The vectors run
/// over basket.dimension(), so loss modes are carried along as vacuum inputs.
class CoherentSidebandState {
 public:
  explicit CoherentSidebandState(ModeBasket basket);
  CoherentSidebandState(ModeBasket basket, ComplexVector alpha, std::vector<QuadratureNoise> noise);

  const ModeBasket& basket() const noexcept { return basket_; }
  const ComplexVector& amplitudes() const noexcept { return alpha_; }
  const std::vector<QuadratureNoise>& noise() const noexcept { return noise_; }

  Complex amplitude(const ModeId& mode) const;
  QuadratureNoise noise(const ModeId& mode) const;

  CoherentSidebandState with_amplitude(const ModeId& mode, Complex value) const;
  CoherentSidebandState with_noise(const ModeId& mode, QuadratureNoise value) const;

 private:
  ModeBasket basket_;
  ComplexVector alpha_;
  std::vector<QuadratureNoise> noise_;
};

// Sine phase modulation: alpha(+1) = beta, alpha(-1) = -beta.
CoherentSidebandState pm_state(double beta, PortId port = PortId::In,
                               const ModeBasket& basket = basket_standard());
// Amplitude modulation: alpha(+-1) = beta.
CoherentSidebandState am_state(double beta, PortId port = PortId::In,
                               const ModeBasket& basket = basket_standard());
// Adds a coherent carrier (offset 0) so it propagates with the sidebands.
CoherentSidebandState with_carrier(const CoherentSidebandState& s, PortId port, Complex amplitude);

// State-preparation UMZI with omega0 tau = lock_sign * pi/2; the Arm1 output becomes
// the new In port and everything else is vacuum. lock_sign -1 keeps the lower
// sideband of a PM input, +1 the upper.
CoherentSidebandState ssb_prep(const CoherentSidebandState& input, double Omega_tau, int lock_sign);

// Power attenuation by `factor` >= 1 at every mode: alpha / sqrt(g), excess noise / g.
CoherentSidebandState attenuate_state(const CoherentSidebandState& s, double factor);

// alpha' = U alpha. Excess noise (V - 1) mixes with weights |U_ij|^2.
CoherentSidebandState apply_unitary(const ModeUnitary& U, const CoherentSidebandState& s);

struct QuadratureMeans {
  Complex plus;
  Complex minus;
};

// X+ = alpha(+1) + conj(alpha(-1)), X- = i (alpha(+1) - conj(alpha(-1))).
QuadratureMeans quadrature_means(const CoherentSidebandState& s, PortId port);

struct MeasuredVariances {
  double plus;
  double minus;
};

// Port noise (mean over the +-1 modes) plus the coherent tone |X|^2.
QuadratureNoise port_noise(const CoherentSidebandState& s, PortId port);
MeasuredVariances measured_variances(const CoherentSidebandState& s, PortId port);

double photon_number(double s_plus, double s_minus);
inline double photon_number(const MeasuredVariances& v) { return photon_number(v.plus, v.minus); }

double sideband_power(const CoherentSidebandState& s, const ModeId& mode);
// Sum of the +-1 sideband powers on a port.
double total_sideband_power(const CoherentSidebandState& s, PortId port);

/// One photon spread over the modes of a basket; amplitudes have unit norm.
class SinglePhotonState {
 public:
  SinglePhotonState(ModeBasket basket, ComplexVector amplitudes);

  const ModeBasket& basket() const noexcept { return basket_; }
  const ComplexVector& amplitudes() const noexcept { return amp_; }
  Complex amplitude(const ModeId& mode) const;
  double norm() const { return amp_.norm(); }

 private:
  ModeBasket basket_;
  ComplexVector amp_;
};

// mu |1>_{-Omega} + nu |1>_{+Omega} on the In port.
SinglePhotonState single_photon(Complex mu, Complex nu, const ModeBasket& basket = basket_standard());

// Propagates through the analyser; input must live on In(+-1) only.
SinglePhotonState single_photon_transform(const SinglePhotonState& psi, double theta, double phi);

}  // namespace sideband

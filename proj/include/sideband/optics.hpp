#pragma once

#include <Eigen/Dense>

#include <array>
#include <complex>
#include <numbers>
#include <span>
#include <variant>

#include "sideband/modes.hpp"

namespace sideband {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kUnitarityTolerance = 1e-12;

/// Linear map on the mode operators of a basket (loss modes included):
/// a_out = U a_in, rows are outputs and columns are inputs.
class ModeUnitary {
 public:
  ModeUnitary(ModeBasket basket, ComplexMatrix matrix);
  static ModeUnitary identity(const ModeBasket& basket);

  const ModeBasket& basket() const noexcept { return basket_; }
  const ComplexMatrix& matrix() const noexcept { return matrix_; }
  Complex entry(const ModeId& output, const ModeId& input) const;

  // max |U U^dagger - I|
  double unitarity_defect() const;
  ModeUnitary adjoint() const;

 private:
  ModeBasket basket_;
  ComplexMatrix matrix_;
};

// 50/50 beamsplitter, symmetric convention, acting in place on two ports at every offset.
struct Beamsplitter {
  PortId port_a;
  PortId port_b;
};

// Path delay: phase exp(i(omega0_tau + k * Omega_tau)) on the port at offset k.
struct Delay {
  PortId port;
  double omega0_tau;
  double Omega_tau;
};

// Offset-independent phase (short delay with Omega tau ~ 0).
struct PhaseShift {
  PortId port;
  double phi;
};

// Acousto-optic modulator that combines two beams. Light on `diffracted_port`
// at offset k - shift_k is diffracted up into `undiffracted_port` at offset k,
// while light on `undiffracted_port` at offset k is diffracted down into
// `diffracted_port` at offset k - shift_k. Each such pair mixes through
//   [[cos theta, i sin theta], [i sin theta, cos theta]]
// which is the only +-1/+-i phase assignment that reproduces the rf-analyser
// output relations. Pairs cut by the truncation edge mix with loss modes.
struct Aom {
  PortId undiffracted_port;
  PortId diffracted_port;
  double theta;
  int shift_k = 2;
};

// Relabels two ports at every offset (a permutation).
struct Swap {
  PortId port_a;
  PortId port_b;
};

using ElementSpec = std::variant<Beamsplitter, Delay, PhaseShift, Aom, Swap>;

ModeUnitary element_unitary(const ElementSpec& spec, const ModeBasket& basket);

// `then` applied after `first`: result = then * first. Throws on basket mismatch.
ModeUnitary compose(const ModeUnitary& first, const ModeUnitary& then);

// Elements in propagation order.
ModeUnitary compose_elements(std::span<const ElementSpec> elements, const ModeBasket& basket);

// Beamsplitter(In, Vac), route onto the arms, Delay on Arm2, Beamsplitter(Arm1, Arm2).
// The interferometer outputs are left on Arm1 and Arm2.
ModeUnitary umzi_unitary(double omega0_tau, double Omega_tau, const ModeBasket& basket);

// The full rf-analyser: UMZI locked at omega0 tau = Omega tau = pi/2, phase phi on
// the Arm2 path, AOM at angle theta with a +2 Omega shift, outputs routed to Out1/Out2.
ModeUnitary analyser_unitary(double theta, double phi, const ModeBasket& basket);

struct ClosedFormTerm {
  ModeId input;
  Complex coefficient;
};

struct ClosedFormRow {
  ModeId output;
  std::array<ClosedFormTerm, 2> terms;
};

// Output relations of the rf-analyser for Out1(+-1) and Out2(+-1).
std::array<ClosedFormRow, 4> analyser_closed_form(double theta, double phi);

// Power fraction of the +Omega (sideband_sign = +1) or -Omega (-1) sideband in
// Arm1 of a UMZI locked at omega0 tau = pi/2: (1 + sign * sin(Omega tau)) / 2.
double umzi_port_transmission(double Omega_tau, int sideband_sign);

struct DeviceParams {
  double Omega = 2.0 * kPi * 90.5e6;  // rad/s
  double omega0_tau = kPi / 2.0;
  double Omega_tau = kPi / 2.0;
  double phi = 0.0;
  double theta = kPi / 4.0;
  double delta_l = 0.83;  // m

  double tau() const noexcept { return delta_l / kSpeedOfLight; }
  // Omega * delta_l / c, the sideband phase the arm-length difference produces.
  double geometric_Omega_tau() const noexcept { return Omega * tau(); }
  void validate() const;
};

}  // namespace sideband

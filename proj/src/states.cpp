#include "sideband/states.hpp"

#include <cmath>
#include <stdexcept>

namespace sideband {

namespace {

constexpr Complex kI{0.0, 1.0};
constexpr double kNoiseFloorTolerance = 1e-12;

Eigen::Index at(const ModeBasket& basket, const ModeId& mode) {
  return static_cast<Eigen::Index>(basket.index(mode));
}

void require_sideband_port(const ModeBasket& basket, PortId port) {
  if (!basket.has_port(port)) throw std::invalid_argument("port " + std::string(port_name(port)) + " not in basket");
}

}  // namespace

CoherentSidebandState::CoherentSidebandState(ModeBasket basket)
    : basket_(std::move(basket)),
      alpha_(ComplexVector::Zero(static_cast<Eigen::Index>(basket_.dimension()))),
      noise_(basket_.dimension()) {}

CoherentSidebandState::CoherentSidebandState(ModeBasket basket, ComplexVector alpha,
                                             std::vector<QuadratureNoise> noise)
    : basket_(std::move(basket)), alpha_(std::move(alpha)), noise_(std::move(noise)) {
  if (alpha_.size() != static_cast<Eigen::Index>(basket_.dimension()) || noise_.size() != basket_.dimension()) {
    throw std::invalid_argument("CoherentSidebandState: vector sizes do not match basket");
  }
  if (!alpha_.allFinite()) throw std::invalid_argument("CoherentSidebandState: non-finite amplitude");
  for (const auto& n : noise_) {
    if (!(n.plus >= 1.0 - kNoiseFloorTolerance && n.minus >= 1.0 - kNoiseFloorTolerance)) {
      throw std::invalid_argument("CoherentSidebandState: noise below the quantum noise limit");
    }
  }
}

Complex CoherentSidebandState::amplitude(const ModeId& mode) const { return alpha_(at(basket_, mode)); }

QuadratureNoise CoherentSidebandState::noise(const ModeId& mode) const { return noise_[basket_.index(mode)]; }

CoherentSidebandState CoherentSidebandState::with_amplitude(const ModeId& mode, Complex value) const {
  auto alpha = alpha_;
  alpha(at(basket_, mode)) = value;
  return {basket_, std::move(alpha), noise_};
}

CoherentSidebandState CoherentSidebandState::with_noise(const ModeId& mode, QuadratureNoise value) const {
  auto noise = noise_;
  noise[basket_.index(mode)] = value;
  return {basket_, alpha_, std::move(noise)};
}

CoherentSidebandState pm_state(double beta, PortId port, const ModeBasket& basket) {
  if (!(beta >= 0.0)) throw std::invalid_argument("pm_state: beta must be non-negative");
  return CoherentSidebandState(basket).with_amplitude({port, +1}, beta).with_amplitude({port, -1}, -beta);
}

CoherentSidebandState am_state(double beta, PortId port, const ModeBasket& basket) {
  if (!(beta >= 0.0)) throw std::invalid_argument("am_state: beta must be non-negative");
  return CoherentSidebandState(basket).with_amplitude({port, +1}, beta).with_amplitude({port, -1}, beta);
}

CoherentSidebandState with_carrier(const CoherentSidebandState& s, PortId port, Complex amplitude) {
  return s.with_amplitude({port, 0}, amplitude);
}

CoherentSidebandState ssb_prep(const CoherentSidebandState& input, double Omega_tau, int lock_sign) {
  if (lock_sign != 1 && lock_sign != -1) throw std::invalid_argument("ssb_prep: lock_sign must be +1 or -1");
  const auto& basket = input.basket();
  const auto filtered = apply_unitary(umzi_unitary(lock_sign * kPi / 2.0, Omega_tau, basket), input);

  CoherentSidebandState out(basket);
  for (int k = -basket.max_offset(); k <= basket.max_offset(); ++k) {
    out = out.with_amplitude({PortId::In, k}, filtered.amplitude({PortId::Arm1, k}))
              .with_noise({PortId::In, k}, filtered.noise({PortId::Arm1, k}));
  }
  return out;
}

CoherentSidebandState apply_unitary(const ModeUnitary& U, const CoherentSidebandState& s) {
  if (!(U.basket() == s.basket())) throw std::invalid_argument("apply_unitary: basket mismatch");
  ComplexVector alpha = U.matrix() * s.amplitudes();

  const auto n = s.noise().size();
  Eigen::VectorXd excess_plus(static_cast<Eigen::Index>(n));
  Eigen::VectorXd excess_minus(static_cast<Eigen::Index>(n));
  for (std::size_t j = 0; j < n; ++j) {
    excess_plus(static_cast<Eigen::Index>(j)) = s.noise()[j].plus - 1.0;
    excess_minus(static_cast<Eigen::Index>(j)) = s.noise()[j].minus - 1.0;
  }
  const Eigen::MatrixXd weights = U.matrix().cwiseAbs2();
  const Eigen::VectorXd mixed_plus = weights * excess_plus;
  const Eigen::VectorXd mixed_minus = weights * excess_minus;

  std::vector<QuadratureNoise> noise(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    // Excess noise is non-negative; clamp rounding below zero so a QNL input stays exactly QNL.
    noise[i] = {1.0 + std::max(0.0, mixed_plus(idx)), 1.0 + std::max(0.0, mixed_minus(idx))};
  }
  return {s.basket(), std::move(alpha), std::move(noise)};
}

CoherentSidebandState attenuate_state(const CoherentSidebandState& s, double factor) {
  if (!(factor >= 1.0)) throw std::invalid_argument("attenuate_state: factor must be >= 1");
  auto noise = s.noise();
  for (auto& n : noise) n = {1.0 + (n.plus - 1.0) / factor, 1.0 + (n.minus - 1.0) / factor};
  return {s.basket(), s.amplitudes() / std::sqrt(factor), std::move(noise)};
}

QuadratureMeans quadrature_means(const CoherentSidebandState& s, PortId port) {
  require_sideband_port(s.basket(), port);
  const Complex upper = s.amplitude({port, +1});
  const Complex lower_conj = std::conj(s.amplitude({port, -1}));
  return {upper + lower_conj, kI * (upper - lower_conj)};
}

QuadratureNoise port_noise(const CoherentSidebandState& s, PortId port) {
  require_sideband_port(s.basket(), port);
  const auto up = s.noise({port, +1});
  const auto down = s.noise({port, -1});
  return {0.5 * (up.plus + down.plus), 0.5 * (up.minus + down.minus)};
}

MeasuredVariances measured_variances(const CoherentSidebandState& s, PortId port) {
  const auto means = quadrature_means(s, port);
  const auto noise = port_noise(s, port);
  return {noise.plus + std::norm(means.plus), noise.minus + std::norm(means.minus)};
}

double photon_number(double s_plus, double s_minus) {
  const double n = (s_plus + s_minus - 2.0) / 4.0;
  if (n < -1e-12) throw std::domain_error("photon_number: variances below the quantum noise limit");
  return std::max(0.0, n);
}

double sideband_power(const CoherentSidebandState& s, const ModeId& mode) { return std::norm(s.amplitude(mode)); }

double total_sideband_power(const CoherentSidebandState& s, PortId port) {
  return sideband_power(s, {port, +1}) + sideband_power(s, {port, -1});
}

SinglePhotonState::SinglePhotonState(ModeBasket basket, ComplexVector amplitudes)
    : basket_(std::move(basket)), amp_(std::move(amplitudes)) {
  if (amp_.size() != static_cast<Eigen::Index>(basket_.dimension())) {
    throw std::invalid_argument("SinglePhotonState: amplitude vector does not match basket");
  }
  if (std::abs(amp_.squaredNorm() - 1.0) > 1e-12) throw std::invalid_argument("SinglePhotonState: not normalised");
}

Complex SinglePhotonState::amplitude(const ModeId& mode) const { return amp_(at(basket_, mode)); }

SinglePhotonState single_photon(Complex mu, Complex nu, const ModeBasket& basket) {
  ComplexVector amp = ComplexVector::Zero(static_cast<Eigen::Index>(basket.dimension()));
  amp(at(basket, {PortId::In, -1})) = mu;
  amp(at(basket, {PortId::In, +1})) = nu;
  return {basket, std::move(amp)};
}

SinglePhotonState single_photon_transform(const SinglePhotonState& psi, double theta, double phi) {
  const auto& basket = psi.basket();
  const auto lower = at(basket, {PortId::In, -1});
  const auto upper = at(basket, {PortId::In, +1});
  for (Eigen::Index i = 0; i < psi.amplitudes().size(); ++i) {
    if (i != lower && i != upper && psi.amplitudes()(i) != Complex{}) {
      throw std::invalid_argument("single_photon_transform: input must be supported on In(+-1) only");
    }
  }
  const auto U = analyser_unitary(theta, phi, basket);
  return {basket, U.matrix() * psi.amplitudes()};
}

}  // namespace sideband

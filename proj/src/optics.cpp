#include "sideband/optics.hpp"

#include <Eigen/SparseCore>

#include <cmath>
#include <stdexcept>
#include <string>

namespace sideband {

namespace {

constexpr Complex kI{0.0, 1.0};

void require_port(const ModeBasket& basket, PortId port, const char* element) {
  if (!basket.has_port(port)) {
    throw std::invalid_argument(std::string(element) + ": port " + std::string(port_name(port)) + " not in basket");
  }
}

void require_distinct(PortId a, PortId b, const char* element) {
  if (a == b) throw std::invalid_argument(std::string(element) + ": ports must be distinct");
}

// Writes a 2x2 block [[d_aa, d_ab], [d_ba, d_bb]] acting on indices (a, b).
void set_block(ComplexMatrix& m, std::size_t a, std::size_t b, Complex d_aa, Complex d_ab, Complex d_ba,
               Complex d_bb) {
  const auto ia = static_cast<Eigen::Index>(a);
  const auto ib = static_cast<Eigen::Index>(b);
  m(ia, ia) = d_aa;
  m(ia, ib) = d_ab;
  m(ib, ia) = d_ba;
  m(ib, ib) = d_bb;
}

ComplexMatrix identity_matrix(const ModeBasket& basket) {
  const auto n = static_cast<Eigen::Index>(basket.dimension());
  return ComplexMatrix::Identity(n, n);
}

ComplexMatrix build(const Beamsplitter& bs, const ModeBasket& basket) {
  require_port(basket, bs.port_a, "Beamsplitter");
  require_port(basket, bs.port_b, "Beamsplitter");
  require_distinct(bs.port_a, bs.port_b, "Beamsplitter");
  auto m = identity_matrix(basket);
  const double r = 1.0 / std::sqrt(2.0);
  for (int k = -basket.max_offset(); k <= basket.max_offset(); ++k) {
    set_block(m, basket.index({bs.port_a, k}), basket.index({bs.port_b, k}), r, kI * r, kI * r, r);
  }
  return m;
}

ComplexMatrix build(const Delay& d, const ModeBasket& basket) {
  require_port(basket, d.port, "Delay");
  auto m = identity_matrix(basket);
  for (int k = -basket.max_offset(); k <= basket.max_offset(); ++k) {
    const auto i = static_cast<Eigen::Index>(basket.index({d.port, k}));
    m(i, i) = std::polar(1.0, d.omega0_tau + k * d.Omega_tau);
  }
  return m;
}

ComplexMatrix build(const PhaseShift& p, const ModeBasket& basket) {
  require_port(basket, p.port, "PhaseShift");
  auto m = identity_matrix(basket);
  const Complex factor = std::polar(1.0, p.phi);
  for (int k = -basket.max_offset(); k <= basket.max_offset(); ++k) {
    const auto i = static_cast<Eigen::Index>(basket.index({p.port, k}));
    m(i, i) = factor;
  }
  return m;
}

ComplexMatrix build(const Aom& aom, const ModeBasket& basket) {
  require_port(basket, aom.undiffracted_port, "Aom");
  require_port(basket, aom.diffracted_port, "Aom");
  require_distinct(aom.undiffracted_port, aom.diffracted_port, "Aom");
  if (!(aom.theta >= -1e-12 && aom.theta <= kPi / 2.0 + 1e-12)) {
    throw std::invalid_argument("Aom: theta must lie in [0, pi/2]");
  }
  const int max_offset = basket.max_offset();
  if (std::abs(aom.shift_k) > 2 * max_offset) {
    throw std::invalid_argument("Aom: |shift_k| exceeds 2 * max_offset");
  }

  auto m = identity_matrix(basket);
  const Complex c = std::cos(aom.theta);
  const Complex s = kI * std::sin(aom.theta);
  std::size_t next_loss = 0;

  for (int k = -max_offset; k <= max_offset; ++k) {
    const auto upper = basket.index({aom.undiffracted_port, k});
    const ModeId partner{aom.diffracted_port, k - aom.shift_k};
    const auto lower = basket.contains(partner) ? basket.index(partner) : basket.loss_index(next_loss++);
    set_block(m, upper, lower, c, s, s, c);
  }
  // Diffracted-port modes whose upshifted order leaves the basket.
  for (int k = -max_offset; k <= max_offset; ++k) {
    if (basket.contains({aom.undiffracted_port, k + aom.shift_k})) continue;
    const auto lower = basket.index({aom.diffracted_port, k});
    set_block(m, basket.loss_index(next_loss++), lower, c, s, s, c);
  }
  return m;
}

ComplexMatrix build(const Swap& sw, const ModeBasket& basket) {
  require_port(basket, sw.port_a, "Swap");
  require_port(basket, sw.port_b, "Swap");
  require_distinct(sw.port_a, sw.port_b, "Swap");
  auto m = identity_matrix(basket);
  for (int k = -basket.max_offset(); k <= basket.max_offset(); ++k) {
    set_block(m, basket.index({sw.port_a, k}), basket.index({sw.port_b, k}), 0.0, 1.0, 1.0, 0.0);
  }
  return m;
}

}  // namespace

ModeUnitary::ModeUnitary(ModeBasket basket, ComplexMatrix matrix)
    : basket_(std::move(basket)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(basket_.dimension());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw std::invalid_argument("ModeUnitary: matrix size does not match basket dimension");
  }
}

ModeUnitary ModeUnitary::identity(const ModeBasket& basket) { return {basket, identity_matrix(basket)}; }

Complex ModeUnitary::entry(const ModeId& output, const ModeId& input) const {
  return matrix_(static_cast<Eigen::Index>(basket_.index(output)), static_cast<Eigen::Index>(basket_.index(input)));
}

double ModeUnitary::unitarity_defect() const {
  const ComplexMatrix product = matrix_ * matrix_.adjoint();
  return (product - ComplexMatrix::Identity(matrix_.rows(), matrix_.cols())).cwiseAbs().maxCoeff();
}

ModeUnitary ModeUnitary::adjoint() const { return {basket_, matrix_.adjoint()}; }

ModeUnitary element_unitary(const ElementSpec& spec, const ModeBasket& basket) {
  return {basket, std::visit([&](const auto& element) { return build(element, basket); }, spec)};
}

ModeUnitary compose(const ModeUnitary& first, const ModeUnitary& then) {
  if (!(first.basket() == then.basket())) throw std::invalid_argument("compose: basket mismatch");
  return {first.basket(), then.matrix() * first.matrix()};
}

ModeUnitary compose_elements(std::span<const ElementSpec> elements, const ModeBasket& basket) {
  // Elements have at most two nonzeros per row, so sparse products keep long chains cheap.
  ComplexMatrix total = identity_matrix(basket);
  for (const auto& element : elements) {
    const Eigen::SparseMatrix<Complex> sparse =
        std::visit([&](const auto& e) { return build(e, basket); }, element).sparseView();
    total = sparse * total;
  }
  return {basket, std::move(total)};
}

ModeUnitary umzi_unitary(double omega0_tau, double Omega_tau, const ModeBasket& basket) {
  const std::array<ElementSpec, 5> chain{
      Beamsplitter{PortId::In, PortId::Vac},
      Swap{PortId::In, PortId::Arm1},
      Swap{PortId::Vac, PortId::Arm2},
      Delay{PortId::Arm2, omega0_tau, Omega_tau},
      Beamsplitter{PortId::Arm1, PortId::Arm2},
  };
  return compose_elements(chain, basket);
}

ModeUnitary analyser_unitary(double theta, double phi, const ModeBasket& basket) {
  if (basket.max_offset() < kDefaultMaxOffset) {
    throw std::invalid_argument("analyser_unitary: basket needs max_offset >= 3");
  }
  const std::array<ElementSpec, 9> chain{
      Beamsplitter{PortId::In, PortId::Vac},
      Swap{PortId::In, PortId::Arm1},
      Swap{PortId::Vac, PortId::Arm2},
      Delay{PortId::Arm2, kPi / 2.0, kPi / 2.0},
      Beamsplitter{PortId::Arm1, PortId::Arm2},
      PhaseShift{PortId::Arm2, phi},
      Aom{PortId::Arm1, PortId::Arm2, theta, 2},
      Swap{PortId::Arm1, PortId::Out1},
      Swap{PortId::Arm2, PortId::Out2},
  };
  return compose_elements(chain, basket);
}

std::array<ClosedFormRow, 4> analyser_closed_form(double theta, double phi) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const Complex e = std::polar(1.0, phi);
  using P = PortId;
  return {{
      {{P::Out1, +1}, {{{{P::In, +1}, c}, {{P::In, -1}, -e * s}}}},
      {{P::Out1, -1}, {{{{P::Vac, -1}, kI * c}, {{P::Vac, -3}, -kI * e * s}}}},
      {{P::Out2, +1}, {{{{P::Vac, +1}, -e * c}, {{P::Vac, +3}, -s}}}},
      {{P::Out2, -1}, {{{{P::In, -1}, kI * e * c}, {{P::In, +1}, kI * s}}}},
  }};
}

double umzi_port_transmission(double Omega_tau, int sideband_sign) {
  if (sideband_sign != 1 && sideband_sign != -1) {
    throw std::invalid_argument("umzi_port_transmission: sideband_sign must be +1 or -1");
  }
  return 0.5 * (1.0 + sideband_sign * std::sin(Omega_tau));
}

void DeviceParams::validate() const {
  for (double v : {Omega, omega0_tau, Omega_tau, phi, theta, delta_l}) {
    if (!std::isfinite(v)) throw std::invalid_argument("DeviceParams: non-finite parameter");
  }
  if (Omega <= 0.0) throw std::invalid_argument("DeviceParams: Omega must be positive");
}

}  // namespace sideband

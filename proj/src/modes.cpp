#include "sideband/modes.hpp"

#include <algorithm>
#include <stdexcept>

namespace sideband {

namespace {

constexpr std::array<std::string_view, kAllPorts.size()> kPortNames{"In",   "Vac",  "Arm1",
                                                                    "Arm2", "Out1", "Out2"};

std::size_t port_ordinal(PortId port) { return static_cast<std::size_t>(port); }

}  // namespace

std::string_view port_name(PortId port) { return kPortNames.at(port_ordinal(port)); }

std::optional<PortId> parse_port(std::string_view name) {
  for (std::size_t i = 0; i < kPortNames.size(); ++i) {
    if (kPortNames[i] == name) return kAllPorts[i];
  }
  return std::nullopt;
}

std::string to_string(const ModeId& mode) {
  std::string out{port_name(mode.port)};
  out += '(';
  if (mode.offset > 0) out += '+';
  out += std::to_string(mode.offset);
  out += ')';
  return out;
}

ModeBasket::ModeBasket(int max_offset, std::vector<PortId> ports)
    : max_offset_(max_offset), ports_(std::move(ports)) {
  if (max_offset_ < 1) throw std::invalid_argument("ModeBasket: max_offset must be positive");
  if (ports_.empty()) throw std::invalid_argument("ModeBasket: at least one port required");
  port_slot_.fill(-1);
  for (std::size_t i = 0; i < ports_.size(); ++i) {
    auto& slot = port_slot_[port_ordinal(ports_[i])];
    if (slot >= 0) throw std::invalid_argument("ModeBasket: duplicate port " + std::string(port_name(ports_[i])));
    slot = static_cast<int>(i);
  }
}

bool ModeBasket::has_port(PortId port) const noexcept { return port_slot_[port_ordinal(port)] >= 0; }

bool ModeBasket::contains(const ModeId& mode) const noexcept {
  return has_port(mode.port) && mode.offset >= -max_offset_ && mode.offset <= max_offset_;
}

std::size_t ModeBasket::index(const ModeId& mode) const {
  if (!contains(mode)) throw std::out_of_range("ModeBasket: mode " + to_string(mode) + " not in basket");
  const auto slot = static_cast<std::size_t>(port_slot_[port_ordinal(mode.port)]);
  return slot * offsets_per_port() + static_cast<std::size_t>(mode.offset + max_offset_);
}

ModeId ModeBasket::mode_at(std::size_t index) const {
  if (index >= mode_count()) throw std::out_of_range("ModeBasket: index is not a physical mode");
  const auto per_port = offsets_per_port();
  return ModeId{ports_[index / per_port], static_cast<int>(index % per_port) - max_offset_};
}

std::size_t ModeBasket::loss_index(std::size_t slot) const {
  if (slot >= loss_count()) throw std::out_of_range("ModeBasket: loss slot out of range");
  return mode_count() + slot;
}

ModeBasket basket_standard(int max_offset) {
  if (max_offset < kDefaultMaxOffset) {
    throw std::invalid_argument("basket_standard: max_offset must be >= 3 to hold the +-3 Omega vacuum inputs");
  }
  return ModeBasket(max_offset, {kAllPorts.begin(), kAllPorts.end()});
}

std::optional<ModeId> shift_offset(const ModeId& mode, int delta_k, const ModeBasket& basket) {
  if (!basket.contains(mode)) throw std::out_of_range("shift_offset: mode " + to_string(mode) + " not in basket");
  ModeId shifted{mode.port, mode.offset + delta_k};
  if (!basket.contains(shifted)) return std::nullopt;
  return shifted;
}

}  // namespace sideband

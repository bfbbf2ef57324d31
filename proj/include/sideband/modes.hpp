#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sideband {

// Spatial ports of the analyser. In/Vac are sources, Out1/Out2 are sinks and
// Arm1/Arm2 are the interferometer paths between them.
enum class PortId { In, Vac, Arm1, Arm2, Out1, Out2 };

inline constexpr std::array<PortId, 6> kAllPorts{PortId::In,   PortId::Vac,  PortId::Arm1,
                                                 PortId::Arm2, PortId::Out1, PortId::Out2};

std::string_view port_name(PortId port);
std::optional<PortId> parse_port(std::string_view name);

// One optical mode: a port at a frequency offset of `offset` times Omega from the carrier.
struct ModeId {
  PortId port = PortId::In;
  int offset = 0;

  friend auto operator<=>(const ModeId&, const ModeId&) = default;
};

std::string to_string(const ModeId& mode);

/// Truncated comb of modes: every declared port at every offset in
/// [-max_offset, max_offset], followed by a block of non-physical loss modes
/// that absorb light a frequency shifter pushes past the truncation edge.
///
/// Physical modes occupy indices 0..mode_count()-1 ordered by port (declaration
/// order) then ascending offset; loss modes occupy mode_count()..dimension()-1.
class ModeBasket {
 public:
  ModeBasket(int max_offset, std::vector<PortId> ports);

  int max_offset() const noexcept { return max_offset_; }
  const std::vector<PortId>& ports() const noexcept { return ports_; }
  bool has_port(PortId port) const noexcept;

  std::size_t offsets_per_port() const noexcept { return static_cast<std::size_t>(2 * max_offset_ + 1); }
  std::size_t mode_count() const noexcept { return ports_.size() * offsets_per_port(); }
  std::size_t loss_count() const noexcept { return static_cast<std::size_t>(4 * max_offset_); }
  std::size_t dimension() const noexcept { return mode_count() + loss_count(); }

  bool contains(const ModeId& mode) const noexcept;
  // Throws std::out_of_range for modes outside the basket.
  std::size_t index(const ModeId& mode) const;
  ModeId mode_at(std::size_t index) const;
  std::size_t loss_index(std::size_t slot) const;

  friend bool operator==(const ModeBasket&, const ModeBasket&) = default;

 private:
  int max_offset_;
  std::vector<PortId> ports_;
  std::array<int, kAllPorts.size()> port_slot_{};
};

inline constexpr int kDefaultMaxOffset = 3;

// All six ports, offsets -max_offset..max_offset. Rejects max_offset < 3.
ModeBasket basket_standard(int max_offset = kDefaultMaxOffset);

// Same port, offset moved by delta_k. std::nullopt means the result falls
// outside the basket; a mode that is not in the basket throws.
std::optional<ModeId> shift_offset(const ModeId& mode, int delta_k, const ModeBasket& basket);

}  // namespace sideband

#include "sideband/csv.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <stdexcept>

namespace sideband {

std::string format_double(double value) {
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  if (ec != std::errc{}) throw std::runtime_error("format_double: conversion failed");
  return {buffer.data(), end};
}

std::string csv_field(std::string_view text) {
  if (text.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(text);
  std::string quoted = "\"";
  for (char c : text) {
    if (c == '"') quoted += '"';
    quoted += c;
  }
  quoted += '"';
  return quoted;
}

void write_csv(std::ostream& out, const Trace& t, std::optional<double> y_clip) {
  out << csv_field(t.x_label) << ',' << csv_field(t.y_label) << "\r\n";
  for (std::size_t i = 0; i < t.size(); ++i) {
    const double y = y_clip ? std::min(t.y[i], *y_clip) : t.y[i];
    out << format_double(t.x[i]) << ',' << format_double(y) << "\r\n";
  }
}

}  // namespace sideband

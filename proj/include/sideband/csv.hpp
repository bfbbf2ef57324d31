#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <string_view>

#include "sideband/measurement.hpp"

namespace sideband {

// Shortest decimal that reads back to the same double.
std::string format_double(double value);

// RFC 4180 field quoting.
std::string csv_field(std::string_view text);

// Header row then one row per sample. Samples above y_clip are written as y_clip.
void write_csv(std::ostream& out, const Trace& t, std::optional<double> y_clip = std::nullopt);

}  // namespace sideband

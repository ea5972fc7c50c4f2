#pragma once

#include <string>

namespace kacz {

/// Shortest-safe round-trip decimal: 17 significant digits, "nan"/"inf" spelled out.
std::string format_double(double value);

/// Same as format_double but an empty string for NaN (missing CSV field).
std::string format_field(double value);

}  // namespace kacz

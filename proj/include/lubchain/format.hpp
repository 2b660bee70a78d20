#pragma once

#include <string>

namespace lubchain {

/// Shortest-safe round-trip text for a double: 17 significant digits.
std::string format_number(double value);

}  // namespace lubchain

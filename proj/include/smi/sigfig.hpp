#pragma once

#include <string>

namespace smi {

/// Rounds half away from zero on the shortest round-trip decimal form, so
/// 0.7 * 0.25 prints as "0.18" even though the double lies just below 0.175.
/// Trailing zeros are kept: 0.203 -> "0.20".
std::string to_significant(double value, int digits = 2);

/// Shortest representation that parses back to the same double.
std::string shortest(double value);

}  // namespace smi

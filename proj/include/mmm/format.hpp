#pragma once

#include <string>

namespace mmm {

/// Shortest decimal form that parses back to the same double, always with a
/// decimal point or exponent ("1.0", "0.25", "1e-20").
std::string format_double(double value);

}  // namespace mmm

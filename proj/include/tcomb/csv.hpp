#pragma once

#include <string>

namespace tcomb {

/// Shortest decimal that round-trips the double; "inf", "-inf", "nan".
std::string format_double(double value);

/// Locale-independent parse of the format above. Throws std::invalid_argument.
double parse_double(const std::string& text);

}  // namespace tcomb

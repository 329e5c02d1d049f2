#pragma once

#include <string>
#include <string_view>

namespace qka {

/// %.17g; round-trips every finite double.
std::string format_double(double value);

std::string trim_copy(std::string_view s);

/// Strict full-string parses; throw std::invalid_argument on junk.
double parse_double(std::string_view s);
long long parse_integer(std::string_view s);

}  // namespace qka

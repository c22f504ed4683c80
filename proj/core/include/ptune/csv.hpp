#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace ptune::csv {

/// Splits one CSV line on commas. Fields never contain commas or quotes in
/// the formats this library writes.
std::vector<std::string> split(std::string_view line);

/// Shortest round-trippable decimal form with '.' separator.
std::string format_double(double value);
double parse_double(std::string_view text);
long long parse_int(std::string_view text);

}  // namespace ptune::csv

#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace mlrank {

// Shortest decimal string that parses back to exactly the same double.
std::string format_double(double value);

// Strict double parse of a whole cell; returns false on trailing junk,
// empty input, or a non-finite result.
bool parse_double(std::string_view cell, double& out);

std::string_view trim(std::string_view s);

// Splits one CSV record on commas. No quoting support; the formats used
// here never emit quoted cells.
std::vector<std::string_view> split_csv_line(std::string_view line);

}  // namespace mlrank

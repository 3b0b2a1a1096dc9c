#pragma once

#include <string>
#include <vector>

namespace sbmh {

/// Shortest round-trippable decimal form ("%.17g"); "inf", "-inf", "nan"
/// for non-finite values.
std::string fmt_double(double x);

/// Joins fields with ',' and appends '\n'.
std::string csv_row(const std::vector<std::string>& fields);

}  // namespace sbmh

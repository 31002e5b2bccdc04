#pragma once

#include <string>

namespace dram3d {

/// printf "%.6g": the fixed precision used by every report.
std::string format_number(double value);

/// `value` rounded to `digits` significant digits (the double nearest to the
/// printed decimal), so serializers emit the same digits as format_number.
double round_significant(double value, int digits = 6);

/// printf "%.<decimals>f".
std::string format_fixed(double value, int decimals);

}  // namespace dram3d

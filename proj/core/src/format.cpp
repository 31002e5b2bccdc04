#include "dram3d/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace dram3d {

std::string format_number(double value) {
  if (value == 0) return "0";  // no "-0"
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", value);
  return buf;
}

double round_significant(double value, int digits) {
  if (value == 0 || !std::isfinite(value)) return value == 0 ? 0.0 : value;
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return std::strtod(buf, nullptr);
}

std::string format_fixed(double value, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, value);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos && s.front() == '-') s.erase(0, 1);
  return s;
}

}  // namespace dram3d

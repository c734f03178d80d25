#pragma once

#include <cstdio>
#include <string>

namespace hullwalk {

// Shortest %g rendering at the given number of significant digits.
inline std::string format_number(double value, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

}  // namespace hullwalk

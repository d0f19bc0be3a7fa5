#pragma once

#include <cstdio>
#include <string>

namespace spacespec {

// Shortest "%g"-style rendering with the given significant digits.
inline std::string format_sig(double x, int digits = 12) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, x);
  return buf;
}

}  // namespace spacespec

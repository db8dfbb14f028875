#pragma once

// Shared text formatting for all on-disk artifacts: shortest round-trippable
// decimal form so identical runs produce bit-identical files.

#include <cstdio>
#include <string>

namespace vlaherm::detail {

inline std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace vlaherm::detail

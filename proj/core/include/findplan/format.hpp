#pragma once

#include <charconv>
#include <string>

namespace findplan {

/// Shortest decimal text that parses back to exactly `value`.
inline std::string format_real(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, ptr);
}

}  // namespace findplan

#pragma once

#include <charconv>
#include <string>

namespace rbskm {

/// Shortest decimal text that reads back to exactly `v`.
inline std::string to_text(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace rbskm

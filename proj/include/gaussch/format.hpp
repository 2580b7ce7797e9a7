#pragma once

#include <charconv>
#include <string>
#include <system_error>

namespace gaussch {

/// Locale-independent rendering with 12 significant digits.
inline std::string format_number(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 12);
  if (res.ec != std::errc{}) return "nan";
  return std::string(buf, res.ptr);
}

}  // namespace gaussch

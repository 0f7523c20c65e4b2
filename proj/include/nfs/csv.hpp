#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace nfs {

/// 17 significant digits, '.' decimal separator, independent of locale.
inline std::string csv_number(double value) {
  if (std::isnan(value)) return "nan";
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, result.ptr);
}

}  // namespace nfs

#include "format.hpp"

#include <array>
#include <charconv>
#include <cstdio>

namespace barotherm::cli {

std::string shortest(double x) {
  if (x == 0.0) x = 0.0;  // drop the sign of zero
  std::array<char, 32> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), ptr);
}

std::string significant(double x, int digits) {
  std::array<char, 48> buf{};
  std::snprintf(buf.data(), buf.size(), "%.*g", digits, x);
  return buf.data();
}

std::string vec_text(const Vec3& v) {
  return shortest(v[0]) + " " + shortest(v[1]) + " " + shortest(v[2]);
}

}  // namespace barotherm::cli

#pragma once

#include <string>

#include "barotherm/vec3.hpp"

namespace barotherm::cli {

/// Shortest decimal text that parses back to the same double.
std::string shortest(double x);

/// Fixed number of significant digits, %g style.
std::string significant(double x, int digits);

/// "x y z" with shortest components.
std::string vec_text(const Vec3& v);

}  // namespace barotherm::cli

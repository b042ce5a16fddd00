#pragma once

#include <cmath>

#include "error.hpp"

namespace sitelink {

// g(z) = (z-1) ln(1 + 1/(z-1)) on [1, inf), with g(1) = 0 by continuity.
// Strictly increasing for z > 1, with limit 1 at infinity.
inline double special_g(double z) {
  if (!(z >= 1.0)) throw config_error("special_g requires z >= 1");
  if (z == 1.0) return 0.0;
  return (z - 1.0) * std::log1p(1.0 / (z - 1.0));
}

// G(z) = z * g(z) = z(z-1) ln(1 + 1/(z-1)); positive and concave on [1, inf).
inline double special_G(double z) {
  if (!(z >= 1.0)) throw config_error("special_G requires z >= 1");
  if (z == 1.0) return 0.0;
  return z * (z - 1.0) * std::log1p(1.0 / (z - 1.0));
}

// H_a(z) = G(z) - a G(z/a); positive and strictly convex for 2 <= a < z.
inline double special_H(double z, int a) {
  if (a < 2) throw config_error("special_H requires a >= 2");
  if (!(static_cast<double>(a) < z)) throw config_error("special_H requires z > a");
  const double ad = static_cast<double>(a);
  return special_G(z) - ad * special_G(z / ad);
}

}  // namespace sitelink

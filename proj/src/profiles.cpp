#include "wavesys/profiles.hpp"

#include <cmath>

namespace wavesys {

double RadialProfile::value(double r) const {
  if (kind == Kind::Zero) return 0.0;
  const double x = std::abs(r) / support_radius;
  if (x >= 1.0) return 0.0;
  const double y = 1.0 - x * x;
  return amplitude * y * y * y * y;
}

double RadialProfile::d1(double r) const {
  if (kind == Kind::Zero) return 0.0;
  const double x = r / support_radius;
  if (std::abs(x) >= 1.0) return 0.0;
  const double y = 1.0 - x * x;
  return amplitude * (-8.0) * x / support_radius * y * y * y;
}

double RadialProfile::d2(double r) const {
  if (kind == Kind::Zero) return 0.0;
  const double x = r / support_radius;
  if (std::abs(x) >= 1.0) return 0.0;
  const double y = 1.0 - x * x;
  return amplitude * (-8.0 * y * y * y + 48.0 * x * x * y * y) /
         (support_radius * support_radius);
}

double RadialProfile::moment(double r) const {
  if (kind == Kind::Zero) return 0.0;
  const double x = std::min(std::abs(r) / support_radius, 1.0);
  const double y = 1.0 - x * x;
  return amplitude * support_radius * support_radius *
         (1.0 - y * y * y * y * y) / 10.0;
}

}  // namespace wavesys

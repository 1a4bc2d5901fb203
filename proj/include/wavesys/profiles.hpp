#pragma once

#include <algorithm>

#include "wavesys/errors.hpp"

namespace wavesys {

// Even, compactly supported C^2 initial-data profile. The Bump kind is
// r -> amplitude * (1 - (r/support_radius)^2)^4 inside the support, 0 outside;
// the quartic power keeps two continuous derivatives at the boundary.
// All evaluators accept any real argument and apply the even extension
// (value and moment even, first derivative odd, second derivative even).
struct RadialProfile {
  enum class Kind { Bump, Zero };

  Kind kind = Kind::Zero;
  double amplitude = 0.0;
  double support_radius = 1.0;

  static RadialProfile bump(double amplitude, double support_radius) {
    if (!(support_radius > 0.0))
      throw DomainError("RadialProfile: support_radius must be > 0");
    return {Kind::Bump, amplitude, support_radius};
  }
  static RadialProfile zero() { return {Kind::Zero, 0.0, 1.0}; }

  double value(double r) const;
  double d1(double r) const;
  double d2(double r) const;
  // moment(r) = int_0^r rho * value(rho) d(rho); even in r.
  double moment(double r) const;
};

// The four data profiles (f, g) for u and (ft, gt) for v of the system.
struct DataSet {
  RadialProfile f, g, ft, gt;

  static DataSet default_bumps(double amplitude = 1.0, double support = 1.0) {
    RadialProfile b = RadialProfile::bump(amplitude, support);
    return {b, b, b, b};
  }

  double max_support() const {
    return std::max(std::max(f.support_radius, g.support_radius),
                    std::max(ft.support_radius, gt.support_radius));
  }
};

}  // namespace wavesys

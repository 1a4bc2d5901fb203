#pragma once

#include <cmath>

#include "wavesys/errors.hpp"

namespace wavesys {

// Japanese bracket <xi>. The primary convention is sqrt(1 + xi^2); defining
// WAVESYS_BRACKET_LINEAR switches the whole build to the 1 + |xi| variant.
inline double jbracket(double x) {
#ifdef WAVESYS_BRACKET_LINEAR
  return 1.0 + std::abs(x);
#else
  return std::sqrt(1.0 + x * x);
#endif
}

// Space-time weights
//   w1(t,r) = <r><t-r>^(mu/p)
//   w2(t,r) = <r>^(p-2)<t+r>^mu        for r <  t/2
//           = <t-r>^(p-3+mu)<t+r>      for r >= t/2   (seam kept exactly)
//   w3(t,r) = <t-r>^mu
struct WeightSet {
  double mu;
  double p;

  WeightSet(double mu_, double p_) : mu(mu_), p(p_) {
    if (!(mu > 0.0) || !(p > 1.0))
      throw DomainError("WeightSet: requires mu > 0 and p > 1");
  }

  double w1(double t, double r) const {
    return jbracket(r) * std::pow(jbracket(t - r), mu / p);
  }
  double w2(double t, double r) const {
    if (r < 0.5 * t)
      return std::pow(jbracket(r), p - 2.0) * std::pow(jbracket(t + r), mu);
    return std::pow(jbracket(t - r), p - 3.0 + mu) * jbracket(t + r);
  }
  double w3(double t, double r) const {
    return std::pow(jbracket(t - r), mu);
  }
};

}  // namespace wavesys

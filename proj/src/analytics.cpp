#include "wavesys/analytics.hpp"

#include <algorithm>
#include <cmath>

namespace wavesys {

namespace {
constexpr double kCriticalTol = 1e-12;
}

ParamPoint::ParamPoint(int n_, double p_, double q_) : n(n_), p(p_), q(q_) {
  if (n < 2) throw DomainError("ParamPoint: dimension n must be >= 2");
  if (!(p > 1.0)) throw DomainError("ParamPoint: exponent p must be > 1");
  if (!(q > 1.0)) throw DomainError("ParamPoint: exponent q must be > 1");
}

const char* to_string(RegionClass c) {
  switch (c) {
    case RegionClass::BlowupY4: return "BlowupY4";
    case RegionClass::GlobalZ7Candidate: return "GlobalZ7Candidate";
    case RegionClass::CriticalB5: return "CriticalB5";
    case RegionClass::Unknown: return "Unknown";
  }
  return "Unknown";
}

double strauss_exponent(int n) {
  if (n < 2) throw DomainError("strauss_exponent: n must be >= 2");
  const double nn = n;
  return (nn + 1.0 + std::sqrt(nn * nn + 10.0 * nn - 7.0)) / (2.0 * (nn - 1.0));
}

double glassey_exponent(int n) {
  if (n < 2) throw DomainError("glassey_exponent: n must be >= 2");
  return (n + 1.0) / (n - 1.0);
}

double curve_residual(CriticalCurve curve, const ParamPoint& pt) {
  const double n = pt.n, p = pt.p, q = pt.q;
  switch (curve) {
    case CriticalCurve::B5:
      return ((n - 1.0) * p / 2.0 - 1.0) * (p * q - 1.0) - (p + 2.0);
    case CriticalCurve::B13: {
      const double lhs = (n - 1.0) / 2.0;
      const double rhs = std::max((p + 2.0 + 1.0 / q) / (p * q - 1.0),
                                  (q + 2.0 + 1.0 / p) / (p * q - 1.0));
      return lhs - rhs;
    }
    case CriticalCurve::B14: {
      const double denom = (n - 1.0) * p - 2.0;
      if (denom == 0.0)
        throw SingularCurveParameter("curve_residual: (n-1)p = 2 on curve B14");
      return q - (4.0 / denom + 1.0);
    }
  }
  throw DomainError("curve_residual: unknown curve");
}

RegionClass classify(const ParamPoint& pt) {
  const double n = pt.n, p = pt.p, q = pt.q;
  const double res_b5 = curve_residual(CriticalCurve::B5, pt);
  if (std::abs(res_b5) <= kCriticalTol) return RegionClass::CriticalB5;
  // Blow-up region: the strict inequality ((n-1)p/2 - 1)(pq-1) < p+2 together
  // with the theorem's range 1 < p < 2n/(n-1).
  if (res_b5 < 0.0 && p < 2.0 * n / (n - 1.0)) return RegionClass::BlowupY4;
  // Global-existence candidate: stated for the radial three-dimensional
  // system only, q > 2, 2 < p < 3, above the curve.
  if (pt.n == 3 && q > 2.0 && p > 2.0 && p < 3.0 &&
      (p - 1.0) * (p * q - 1.0) > p + 2.0)
    return RegionClass::GlobalZ7Candidate;
  return RegionClass::Unknown;
}

double blowup_lifespan_exponent(const ParamPoint& pt) {
  const double n = pt.n, p = pt.p, q = pt.q;
  const double denom = p + 2.0 - ((n - 1.0) * p / 2.0 - 1.0) * (p * q - 1.0);
  if (denom <= 0.0 || classify(pt) != RegionClass::BlowupY4)
    throw NotInBlowupRegion("blowup_lifespan_exponent: point not in the blow-up region");
  return p * (p * q - 1.0) / denom;
}

double b6_lifespan_exponent(int n) {
  if (n != 2 && n != 3)
    throw DomainError("b6_lifespan_exponent: theorem covers n = 2, 3 only");
  return 6.0 / (10.0 - 3.0 * n);
}

ComparisonParams comparison_parameters(const ParamPoint& pt, double A, double B,
                                       double eps) {
  if (classify(pt) != RegionClass::BlowupY4)
    throw NotInBlowupRegion("comparison_parameters: point not in the blow-up region");
  if (!(A > 0.0) || !(B > 0.0) || !(eps > 0.0))
    throw DomainError("comparison_parameters: A, B, eps must be positive");
  const double n = pt.n, p = pt.p, q = pt.q;
  ComparisonParams out;
  out.p = p;
  out.q = q;
  out.A = A;
  out.B = B;
  out.alpha = n * (q - 1.0);
  out.beta = n * (p - 1.0);
  out.a = 2.0 - (n - 1.0) * (p - 2.0) / 2.0;
  out.kappa = A * std::pow(eps, p);
  return out;
}

double lemma_y8_exponent(double p, double q, double alpha, double beta,
                         double a) {
  const double denom = p + 2.0 + a * (p * q - 1.0) - (beta + alpha * p);
  if (denom <= 0.0)
    throw ConditionY12Violated(
        "lemma_y8_exponent: beta + alpha p >= p + 2 + a(pq-1)");
  return (p * q - 1.0) / denom;
}

MuWindow mu_window(double p, double q) {
  if (!(q > 2.0) || !(p > 2.0) || !(p < 3.0))
    throw DomainError("mu_window: requires q > 2 and 2 < p < 3");
  const double lo =
      std::max(3.0 - p, p * (2.0 - (p - 2.0) * q) / (p * q - 1.0));
  const double hi = 1.0;
  if (lo >= hi)
    throw EmptyMuWindow("mu_window: window is empty; the global-existence "
                        "condition fails at this (p, q)");
  MuWindow w{lo, hi, (lo + hi) / 2.0};
  // The chosen midpoint must satisfy both window inequalities and the derived
  // integrability condition mu/p + 1 - (p-2+mu) q < -1.
  const double mu = w.chosen_mu;
  const bool z6 = (3.0 - p < mu) && (mu < 1.0) &&
                  (p * (2.0 - (p - 2.0) * q) < (p * q - 1.0) * mu);
  const bool z22 = mu / p + 1.0 - (p - 2.0 + mu) * q < -1.0;
  if (!z6 || !z22)
    throw std::logic_error("mu_window: midpoint fails admissibility check");
  return w;
}

}  // namespace wavesys

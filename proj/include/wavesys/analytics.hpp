#pragma once

#include <string>

#include "wavesys/errors.hpp"

// Closed-form exponent and critical-curve arithmetic for the system
//   d^2u/dt^2 - Laplace(u) = |v|^q,   d^2v/dt^2 - Laplace(v) = |du/dt|^p,
// together with region classification and the weight-exponent window used by
// the global-existence machinery.

namespace wavesys {

struct ParamPoint {
  int n;
  double p;
  double q;
  ParamPoint(int n_, double p_, double q_);
};

enum class RegionClass { BlowupY4, GlobalZ7Candidate, CriticalB5, Unknown };

const char* to_string(RegionClass c);

enum class CriticalCurve { B5, B13, B14 };

struct MuWindow {
  double lo;
  double hi;
  double chosen_mu;
};

// Parameters of the ordinary differential comparison system
//   F'' = A (t+1)^-alpha G^q,  G'' = B (t+1)^-beta (F')^p,
// with the lower-bound channel G >= kappa t^a.
struct ComparisonParams {
  double p;
  double q;
  double A;
  double B;
  double alpha;
  double beta;
  double a;
  double kappa;
};

// Positive root of (n-1) q^2 - (n+1) q - 2 = 0.
double strauss_exponent(int n);

// (n+1)/(n-1).
double glassey_exponent(int n);

// Signed residual of a critical curve at (n, p, q); negative on the blow-up
// side of the curve.
double curve_residual(CriticalCurve curve, const ParamPoint& pt);

RegionClass classify(const ParamPoint& pt);

// Exponent E in the lifespan bound T <= C eps^-E for the blow-up region:
// E = p(pq-1) / (p+2 - ((n-1)p/2 - 1)(pq-1)).
double blowup_lifespan_exponent(const ParamPoint& pt);

// 6/(10-3n) for n in {2,3}; coincides with blowup_lifespan_exponent(n,2,2).
double b6_lifespan_exponent(int n);

// a = 2-(n-1)(p-2)/2, alpha = n(q-1), beta = n(p-1), kappa = A eps^p.
ComparisonParams comparison_parameters(const ParamPoint& pt, double A, double B,
                                       double eps);

// (pq-1) / (p+2 + a(pq-1) - (beta + alpha p)), requiring the denominator > 0.
double lemma_y8_exponent(double p, double q, double alpha, double beta,
                         double a);

// Admissible weight-exponent window (max(3-p, p(2-(p-2)q)/(pq-1)), 1) with
// chosen_mu at the midpoint. Requires q > 2 and 2 < p < 3.
MuWindow mu_window(double p, double q);

}  // namespace wavesys

#pragma once

#include <utility>
#include <vector>

#include "wavesys/errors.hpp"

// The positive test functions used in the averaged-functional argument:
//   phi1(x) = integral over the unit sphere of exp(x . omega) d omega,
//   psi1(t, x) = phi1(x) exp(-t),
// plus the weighted norm of psi1 on the light ball |x| <= t+1 and the decay
// ratio scan against (t+1)^{(n-1)(1/2 - 1/p)}.

namespace wavesys {

struct TestFunctionEval {
  int n;
  double r;
  double value;
};

// Surface measure of the unit sphere in R^n.
double sphere_area(int n);

// Modified Bessel function I0: power series for x <= 15, asymptotic
// expansion beyond.
double bessel_i0(double x);
double log_bessel_i0(double x);

// phi1 at radius r (the function is radial). Closed forms for n = 2, 3;
// general n by quadrature of the polar-angle integral. Overflows for large r;
// use log_phi1 past r ~ 700.
double phi1(int n, double r);

// log(phi1), safe for large r.
double log_phi1(int n, double r);

TestFunctionEval phi1_eval(int n, double r);

// || psi1(t, .) ||_{L^{p'}(|x| <= t+1)} with p' = p/(p-1), evaluated by
// adaptive radial quadrature in log space.
double psi1_weighted_norm(int n, double p, double t);

// ratio(t) = psi1_weighted_norm(n, p, t) / (t+1)^{(n-1)(1/2 - 1/p)}.
std::vector<std::pair<double, double>> y20_ratio_scan(
    int n, double p, const std::vector<double>& ts);

}  // namespace wavesys

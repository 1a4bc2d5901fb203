#pragma once

#include <functional>
#include <vector>

#include "wavesys/errors.hpp"

// Adaptive Gauss-Kronrod 7/15 quadrature with interval bisection. Used for
// the test-function norms, kernel-estimate scans and quadrature oracles.

namespace wavesys {

struct QuadOptions {
  double rel_tol = 1e-10;
  double abs_tol = 1e-300;
  int max_intervals = 20000;
};

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  bool converged = false;
  int evaluations = 0;
};

QuadResult gk15_adaptive(const std::function<double(double)>& f, double a,
                         double b, const QuadOptions& opt = {});

// Piecewise variant: integrates between consecutive breakpoints and sums.
// Breakpoints outside (a, b) are ignored; useful for integrands with kinks.
QuadResult gk15_adaptive(const std::function<double(double)>& f, double a,
                         double b, std::vector<double> breakpoints,
                         const QuadOptions& opt = {});

// Convenience wrapper that throws NumericError when the requested tolerance
// was not reached.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadOptions& opt = {});
double integrate(const std::function<double(double)>& f, double a, double b,
                 std::vector<double> breakpoints, const QuadOptions& opt = {});

}  // namespace wavesys

#pragma once

#include <string>
#include <utility>
#include <vector>

#include "wavesys/analytics.hpp"
#include "wavesys/errors.hpp"

namespace wavesys {

// State of the comparison system F'' = A(t+1)^-alpha G^q,
// G'' = B(t+1)^-beta (F')^p (+ kappa (t+1)^(a-2) forcing channel).
struct ComparisonState {
  double t = 0.0;
  double F = 0.0;
  double Fp = 0.0;
  double G = 0.0;
  double Gp = 0.0;
};

enum class BlowupStatus { Blowup, NoBlowupByHorizon, Inconclusive };

const char* to_string(BlowupStatus s);

struct BlowupEstimate {
  double t_low = 0.0;
  double t_high = 0.0;
  BlowupStatus status = BlowupStatus::Inconclusive;
};

struct OdeRun {
  std::vector<ComparisonState> trajectory;
  BlowupEstimate estimate;
};

// Log-log regression result. points keeps the raw (x, y) pairs the fit was
// computed from; channel records how a sweep realized its abscissa.
struct ScalingFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<std::pair<double, double>> points;
  std::string channel;
};

// How kappa_sweep injects kappa into a run: as the initial slope G'(0), or as
// the forcing term kappa (t+1)^(a-2) with the matching seed slope.
enum class KappaChannel { InitialSlope, Forcing };

// Adaptive embedded Runge-Kutta integration of the equality system up to
// min(horizon, blow-up). Blow-up is declared when the step controller
// collapses (h < t * c_collapse) while G has doubled since the collapse
// onset; the reported bracket has width <= tol * t_low for tol >= 1e-11.
OdeRun integrate_comparison(const ComparisonParams& params,
                            const ComparisonState& init, double horizon,
                            double tol);

// Least-squares fit of log G vs log t on trajectory samples with t > t0;
// returns (kappa_hat, a_hat). The overload without t0 uses the lemma's
// threshold max{1, G(0)/G'(0)}.
std::pair<double, double> verify_lower_bound_y11(
    const std::vector<ComparisonState>& trajectory, double t0);
std::pair<double, double> verify_lower_bound_y11(
    const std::vector<ComparisonState>& trajectory);

// Runs the integrator for each kappa and fits log T*(kappa) vs log kappa.
// Requires >= 4 kappas spanning >= 1.2 decades. Any run that fails to blow
// up raises PartialFitError listing the failed kappas.
ScalingFit kappa_sweep(const ComparisonParams& base,
                       const std::vector<double>& kappas, double horizon,
                       KappaChannel channel = KappaChannel::InitialSlope,
                       double tol = 1e-10);

// Ordinary least squares on (log x, log y); needs >= 3 points, all positive.
ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points);

}  // namespace wavesys

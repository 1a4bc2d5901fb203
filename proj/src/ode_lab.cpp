#include "wavesys/ode_lab.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

namespace wavesys {

namespace {

using Eigen::Vector4d;

// State layout: y = (F, F', G, G').
Vector4d rhs(const ComparisonParams& c, double t, const Vector4d& y) {
  const double tp1 = t + 1.0;
  const double G = std::max(y[2], 0.0);
  const double Fp = std::max(y[1], 0.0);
  Vector4d dy;
  dy[0] = y[1];
  dy[1] = c.A * std::pow(tp1, -c.alpha) * std::pow(G, c.q);
  dy[2] = y[3];
  dy[3] = c.B * std::pow(tp1, -c.beta) * std::pow(Fp, c.p) +
          c.kappa * std::pow(tp1, c.a - 2.0);
  return dy;
}

// Dormand-Prince 5(4) tableau.
constexpr double kC[7] = {0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA2[1] = {1.0 / 5};
constexpr double kA3[2] = {3.0 / 40, 9.0 / 40};
constexpr double kA4[3] = {44.0 / 45, -56.0 / 15, 32.0 / 9};
constexpr double kA5[4] = {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561,
                           -212.0 / 729};
constexpr double kA6[5] = {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247,
                           49.0 / 176, -5103.0 / 18656};
constexpr double kB5[7] = {35.0 / 384,      0.0,         500.0 / 1113,
                           125.0 / 192,     -2187.0 / 6784, 11.0 / 84, 0.0};
constexpr double kB4[7] = {5179.0 / 57600,    0.0,          7571.0 / 16695,
                           393.0 / 640,       -92097.0 / 339200,
                           187.0 / 2100,      1.0 / 40};

}  // namespace

const char* to_string(BlowupStatus s) {
  switch (s) {
    case BlowupStatus::Blowup:
      return "Blowup";
    case BlowupStatus::NoBlowupByHorizon:
      return "NoBlowupByHorizon";
    case BlowupStatus::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

OdeRun integrate_comparison(const ComparisonParams& params,
                            const ComparisonState& init, double horizon,
                            double tol) {
  if (params.A < 0.0 || params.B < 0.0 || params.kappa < 0.0)
    throw DomainError("integrate_comparison: A, B, kappa must be >= 0");
  if (!(params.p > 0.0) || !(params.q > 0.0))
    throw DomainError("integrate_comparison: p, q must be positive");
  if (!(init.Gp > 0.0) || init.F < 0.0 || init.Fp < 0.0 || init.G < 0.0)
    throw DomainError(
        "integrate_comparison: need G'(0) > 0 and F, F', G >= 0");
  if (!(horizon > init.t)) throw DomainError("integrate_comparison: horizon");
  if (!(tol > 0.0)) throw DomainError("integrate_comparison: tol");

  // Collapse scale: bracket [t, t + 1e4 h] then has width <= tol * t.
  const double c_collapse = std::clamp(tol * 1e-4, 1e-15, 1e-8);
  const double c_mile = 1e4 * c_collapse;
  constexpr double kBracketWiden = 1e4;
  constexpr long kMaxSteps = 4000000;

  OdeRun run;
  double t = init.t;
  Vector4d y(init.F, init.Fp, init.G, init.Gp);
  run.trajectory.push_back(init);

  Vector4d k[7];
  k[0] = rhs(params, t, y);
  double h = std::min(1e-4, 0.1 * (t + 1.0));
  bool marked = false;
  double g_mark = std::numeric_limits<double>::infinity();

  auto conclude = [&](BlowupStatus st, double lo, double hi) {
    run.estimate = {lo, hi, st};
  };

  for (long step = 0; step < kMaxSteps; ++step) {
    h = std::min(h, 0.1 * (t + 1.0));
    const double h_step = std::min(h, horizon - t);

    Vector4d y2 = y + h_step * kA2[0] * k[0];
    k[1] = rhs(params, t + kC[1] * h_step, y2);
    Vector4d y3 = y + h_step * (kA3[0] * k[0] + kA3[1] * k[1]);
    k[2] = rhs(params, t + kC[2] * h_step, y3);
    Vector4d y4 = y + h_step * (kA4[0] * k[0] + kA4[1] * k[1] + kA4[2] * k[2]);
    k[3] = rhs(params, t + kC[3] * h_step, y4);
    Vector4d y5 = y + h_step * (kA5[0] * k[0] + kA5[1] * k[1] +
                                kA5[2] * k[2] + kA5[3] * k[3]);
    k[4] = rhs(params, t + kC[4] * h_step, y5);
    Vector4d y6 = y + h_step * (kA6[0] * k[0] + kA6[1] * k[1] + kA6[2] * k[2] +
                                kA6[3] * k[3] + kA6[4] * k[4]);
    k[5] = rhs(params, t + kC[5] * h_step, y6);
    Vector4d ynew = y + h_step * (kB5[0] * k[0] + kB5[2] * k[2] +
                                  kB5[3] * k[3] + kB5[4] * k[4] + kB5[5] * k[5]);
    k[6] = rhs(params, t + h_step, ynew);

    if (!ynew.allFinite() || !k[6].allFinite()) {
      conclude(BlowupStatus::Inconclusive, t, t + kBracketWiden * h_step);
      return run;
    }

    Vector4d yerr = Vector4d::Zero();
    for (int i = 0; i < 7; ++i) yerr += (kB5[i] - kB4[i]) * k[i];
    yerr *= h_step;
    double err = 0.0;
    for (int i = 0; i < 4; ++i) {
      const double sc = tol + tol * std::max(std::abs(y[i]), std::abs(ynew[i]));
      const double e = yerr[i] / sc;
      err += e * e;
    }
    err = std::sqrt(err / 4.0);

    if (err <= 1.0) {
      t += h_step;
      y = ynew;
      k[0] = k[6];  // first-same-as-last
      run.trajectory.push_back({t, y[0], y[1], y[2], y[3]});

      if (!marked && h < c_mile * t) {
        marked = true;
        g_mark = y[2];
      }
      if (marked && h < c_collapse * t && y[2] >= 2.0 * g_mark) {
        conclude(BlowupStatus::Blowup, t, t + kBracketWiden * h);
        return run;
      }
      if (t >= horizon * (1.0 - 1e-14) || t >= horizon) {
        conclude(BlowupStatus::NoBlowupByHorizon, horizon, horizon);
        return run;
      }
    }

    const double fac =
        std::clamp(0.9 * std::pow(std::max(err, 1e-30), -0.2), 0.2, 5.0);
    h = h_step * fac;
    if (t + h == t) {
      conclude(BlowupStatus::Inconclusive, t, t + kBracketWiden * h);
      return run;
    }
  }
  conclude(BlowupStatus::Inconclusive, t, t + kBracketWiden * h);
  return run;
}

std::pair<double, double> verify_lower_bound_y11(
    const std::vector<ComparisonState>& trajectory, double t0) {
  std::vector<std::pair<double, double>> pts;
  for (const ComparisonState& s : trajectory) {
    if (s.t > t0) {
      if (!(s.G > 0.0))
        throw DomainError("verify_lower_bound_y11: G must be > 0 past t0");
      pts.emplace_back(s.t, s.G);
    }
  }
  if (pts.size() < 3)
    throw InsufficientData("verify_lower_bound_y11: fewer than 3 samples past t0");
  ScalingFit fit = fit_power_law(pts);
  return {std::exp(fit.intercept), fit.slope};
}

std::pair<double, double> verify_lower_bound_y11(
    const std::vector<ComparisonState>& trajectory) {
  if (trajectory.empty())
    throw InsufficientData("verify_lower_bound_y11: empty trajectory");
  const ComparisonState& s0 = trajectory.front();
  if (!(s0.Gp > 0.0))
    throw DomainError("verify_lower_bound_y11: G'(0) must be > 0");
  return verify_lower_bound_y11(trajectory, std::max(1.0, s0.G / s0.Gp));
}

ScalingFit kappa_sweep(const ComparisonParams& base,
                       const std::vector<double>& kappas, double horizon,
                       KappaChannel channel, double tol) {
  if (kappas.size() < 4) throw DomainError("kappa_sweep: need >= 4 kappas");
  std::vector<double> ks = kappas;
  std::sort(ks.begin(), ks.end());
  if (!(ks.front() > 0.0)) throw DomainError("kappa_sweep: kappas must be > 0");
  if (std::log10(ks.back() / ks.front()) < 1.2 - 1e-12)
    throw DomainError("kappa_sweep: kappas must span >= 1.2 decades");

  std::vector<std::pair<double, double>> points;
  std::vector<double> failed;
  for (double kap : ks) {
    ComparisonParams p = base;
    ComparisonState init;
    if (channel == KappaChannel::InitialSlope) {
      p.kappa = 0.0;
      init.Gp = kap;
    } else {
      p.kappa = kap;
      init.Gp = kap;
    }
    OdeRun run = integrate_comparison(p, init, horizon, tol);
    if (run.estimate.status != BlowupStatus::Blowup) {
      failed.push_back(kap);
      continue;
    }
    points.emplace_back(kap,
                        0.5 * (run.estimate.t_low + run.estimate.t_high));
  }
  if (!failed.empty())
    throw PartialFitError(failed, "kappa_sweep: runs without blow-up");

  ScalingFit fit = fit_power_law(points);
  fit.channel = channel == KappaChannel::InitialSlope ? "initial-slope"
                                                      : "eps-forcing";
  return fit;
}

ScalingFit fit_power_law(const std::vector<std::pair<double, double>>& points) {
  if (points.size() < 3)
    throw InsufficientData("fit_power_law: need at least 3 points");
  const int n = static_cast<int>(points.size());
  Eigen::MatrixX2d X(n, 2);
  Eigen::VectorXd Y(n);
  for (int i = 0; i < n; ++i) {
    if (!(points[i].first > 0.0) || !(points[i].second > 0.0))
      throw DomainError("fit_power_law: coordinates must be positive");
    X(i, 0) = 1.0;
    X(i, 1) = std::log(points[i].first);
    Y(i) = std::log(points[i].second);
  }
  Eigen::Vector2d beta = X.colPivHouseholderQr().solve(Y);
  const double mean = Y.mean();
  const double ss_tot = (Y.array() - mean).matrix().squaredNorm();
  const double ss_res = (Y - X * beta).squaredNorm();
  ScalingFit fit;
  fit.intercept = beta[0];
  fit.slope = beta[1];
  fit.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0)
                               : (ss_res <= 1e-28 ? 1.0 : 0.0);
  fit.points = points;
  return fit;
}

}  // namespace wavesys

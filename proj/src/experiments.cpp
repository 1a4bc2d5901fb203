#include "wavesys/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "wavesys/quadrature.hpp"
#include "wavesys/testfn.hpp"
#include "wavesys/weights.hpp"

namespace wavesys {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLogSqrt2 = 0.34657359027997264;

// 16-point Gauss-Legendre: positive half of the nodes on [-1, 1].
constexpr int kGlHalf = 8;
constexpr double kGlX[kGlHalf] = {
    0.0950125098376374, 0.2816035507792589, 0.4580167776572274,
    0.6178762444026438, 0.7554044083550030, 0.8656312023878318,
    0.9445750230732326, 0.9894009349916499};
constexpr double kGlW[kGlHalf] = {
    0.1894506104550685, 0.1826034150449236, 0.1691565193950025,
    0.1495959888165767, 0.1246289712555339, 0.0951585116824928,
    0.0622535239386479, 0.0271524594117541};

std::vector<double> default_scan_ts() {
  return {1.0, 3.0, 10.0, 30.0, 100.0, 300.0, 1000.0};
}

// sup over the large-t half of the samples / sup over the small-t half,
// split at the sample-median t.
double stabilization(const std::vector<BoundSample>& samples) {
  if (samples.size() < 2) return 1.0;
  std::vector<double> ts;
  ts.reserve(samples.size());
  for (const BoundSample& s : samples) ts.push_back(s.t);
  std::sort(ts.begin(), ts.end());
  const double split = ts[ts.size() / 2];
  double lo = -1.0, hi = -1.0;
  for (const BoundSample& s : samples) {
    double& side = (s.t >= split) ? hi : lo;
    side = std::max(side, s.value);
  }
  if (lo < 0.0 || hi < 0.0) return 1.0;  // all samples on one side
  if (lo == 0.0) return hi == 0.0 ? 1.0 : std::numeric_limits<double>::infinity();
  return hi / lo;
}

void finalize(BoundReport& rep, const char* who) {
  if (rep.samples.empty())
    throw NumericError(std::string(who) + ": every sample point failed");
  rep.sample_sup = 0.0;
  for (const BoundSample& s : rep.samples)
    rep.sample_sup = std::max(rep.sample_sup, s.value);
  rep.stabilization_ratio = stabilization(rep.samples);
}

using Source = std::function<double(double, double)>;  // F(s, rho), rho >= 0

// L[F](t, r) = (1/2r) int_0^t int_{|r-(t-s)|}^{r+(t-s)} rho F(s, rho) drho ds
// with the r -> 0 limit int_0^t (t-s) F(s, t-s) ds.
double quad_L(const Source& F, double t, double r) {
  QuadOptions outer{1e-7, 1e-13, 4000};
  if (t <= 0.0) return 0.0;
  if (r < 1e-12) {
    return integrate(
        [&](double s) { return (t - s) * F(s, t - s); }, 0.0, t, outer);
  }
  QuadOptions inner{1e-9, 1e-14, 4000};
  auto shell = [&](double s) {
    const double lo = std::abs(r - (t - s));
    const double hi = r + (t - s);
    if (!(hi > lo)) return 0.0;
    return integrate([&](double rho) { return rho * F(s, rho); }, lo, hi, {s},
                     inner);
  };
  return integrate(shell, 0.0, t, {t - r}, outer) / (2.0 * r);
}

// K+/K- [F](t, r) = (1/2) int_0^t ( rho+ F(s, rho+) +/- rho- F(s, |rho-|) ) ds
// with rho+- = r +- (t - s) kept signed.
double quad_K(int sgn, const Source& F, double t, double r,
              std::vector<double> bps) {
  if (t <= 0.0) return 0.0;
  QuadOptions opt{1e-9, 1e-13, 8000};
  auto g = [&](double s) {
    const double rp = r + (t - s);
    const double rm = r - (t - s);
    const double vp = rp * F(s, rp);
    const double vm = rm * F(s, std::abs(rm));
    return (sgn > 0) ? vp + vm : vp - vm;
  };
  return 0.5 * integrate(g, 0.0, t, std::move(bps), opt);
}

// Kinks of s -> w2(s, |r -+ (t-s)|) and of the even extension, clipped by the
// piecewise integrator to (0, t).
std::vector<double> kplus_breakpoints(double t, double r) {
  return {t - r,           2.0 * (t + r) / 3.0, 0.5 * (t + r),
          2.0 * (t - r) / 3.0, 2.0 * (t - r),   0.5 * (t - r)};
}

std::vector<double> kminus_breakpoints(double t, double r) {
  return {t - r, 0.5 * (t + r), 0.5 * (t - r)};
}

double kernel_bound_value(EstimateId id, const WeightSet& W, double q,
                          double t, double r) {
  const double p = W.p;
  Source w1_inv_p = [&](double s, double rho) {
    return std::pow(W.w1(s, rho), -p);
  };
  Source w2_inv_q = [&](double s, double rho) {
    return std::pow(W.w2(s, rho), -q);
  };
  switch (id) {
    case EstimateId::Z9:
      return W.w2(t, r) * std::abs(quad_L(w1_inv_p, t, r));
    case EstimateId::Z10:
      return std::pow(jbracket(t - r), W.mu / p) *
             std::abs(quad_K(+1, w2_inv_q, t, r, kplus_breakpoints(t, r)));
    case EstimateId::Z11:
      return std::pow(jbracket(t), W.mu / p) / r *
             std::abs(quad_K(+1, w2_inv_q, t, r, kplus_breakpoints(t, r)));
    case EstimateId::Z12:
      return W.w3(t, r) * std::abs(quad_K(-1, w1_inv_p, t, r,
                                          kminus_breakpoints(t, r)));
    default:
      throw DomainError("kernel_bound_value: estimate is not one of Z9-Z12");
  }
}

double z17_value(double kappa, double t, double r) {
  const double rhs =
      std::pow(jbracket(t + r), -1.0) * std::pow(jbracket(t - r), 1.0 - kappa);
  double lhs;
  if (r < 1e-12) {
    lhs = 2.0 * std::pow(jbracket(t), -kappa);
  } else {
    QuadOptions opt{1e-11, 1e-15, 2000};
    lhs = integrate(
              [&](double tau) { return std::pow(jbracket(tau), -kappa); },
              std::abs(t - r), t + r, opt) /
          r;
  }
  return lhs / rhs;
}

// int_0^t (w2(s, r_theta)^(q-1) w3(s, r_theta))^-1 ds for one theta, with
// r_theta = theta (r + (t-s)) + (1-theta) |r - (t-s)|.
double z25_s_integral(const WeightSet& W, double q, double t, double r,
                      double theta) {
  const double c = 2.0 * theta - 1.0;
  auto r_theta = [&](double s) {
    return (s < t - r) ? (t - s) + c * r : r + c * (t - s);
  };
  auto f = [&](double s) {
    const double rho = r_theta(s);
    return 1.0 / (std::pow(W.w2(s, rho), q - 1.0) * W.w3(s, rho));
  };
  std::vector<double> bps;
  bps.push_back(t - r);
  bps.push_back((t + c * r) / 1.5);  // w2 seam r_theta = s/2, s < t-r branch
  bps.push_back((t + c * r) / 2.0);  // s = r_theta crossing, s < t-r branch
  if (std::abs(2.0 * theta - 0.5) > 1e-9)
    bps.push_back((r + c * t) / (2.0 * theta - 0.5));  // w2 seam, s > t-r
  if (theta > 1e-9)
    bps.push_back((r + c * t) / (2.0 * theta));  // crossing, s > t-r
  QuadOptions opt{1e-9, 1e-13, 4000};
  return integrate(f, 0.0, t, std::move(bps), opt);
}

double z25_value(const WeightSet& W, double q, double t, double r) {
  double total = 0.0;
  for (int half = 0; half < 2; ++half) {
    for (int i = 0; i < kGlHalf; ++i) {
      const double theta = 0.5 * (1.0 + (half ? kGlX[i] : -kGlX[i]));
      total += 0.5 * kGlW[i] * z25_s_integral(W, q, t, r, theta);
    }
  }
  return total * std::pow(jbracket(t), W.mu / W.p);
}

void check_span(const std::vector<double>& eps, const char* who) {
  if (eps.size() < 4)
    throw DomainError(std::string(who) + ": need at least 4 eps values");
  double lo = eps[0], hi = eps[0];
  for (double e : eps) {
    if (!(e > 0.0))
      throw DomainError(std::string(who) + ": eps values must be positive");
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  if (hi < 2.0 * lo * (1.0 - 1e-12))
    throw DomainError(std::string(who) +
                      ": eps values must span at least a factor of 2");
}

}  // namespace

const char* to_string(EstimateId id) {
  switch (id) {
    case EstimateId::Z9:  return "Z9";
    case EstimateId::Z10: return "Z10";
    case EstimateId::Z11: return "Z11";
    case EstimateId::Z12: return "Z12";
    case EstimateId::Z17: return "Z17";
    case EstimateId::Z25: return "Z25";
    case EstimateId::Y20: return "Y20";
  }
  return "?";
}

std::vector<double> bound_scan_radii(double t, double r0) {
  std::vector<double> rs = {0.0,       0.25 * t, 0.5 * t, 0.75 * t,
                            t - 1.0,   t,        t + r0};
  std::vector<double> out;
  std::sort(rs.begin(), rs.end());
  for (double r : rs) {
    r = std::clamp(r, 0.0, t + r0);
    if (out.empty() || r > out.back() + 1e-12) out.push_back(r);
  }
  return out;
}

BoundReport verify_kernel_bound(EstimateId id, double mu, double p, double q,
                                const std::vector<double>& sample_ts,
                                const std::vector<double>& sample_rs) {
  if (id != EstimateId::Z9 && id != EstimateId::Z10 &&
      id != EstimateId::Z11 && id != EstimateId::Z12)
    throw DomainError("verify_kernel_bound: estimate must be one of Z9-Z12");
  if (!(q > 1.0))
    throw DomainError("verify_kernel_bound: requires q > 1");
  if (sample_ts.empty())
    throw DomainError("verify_kernel_bound: sample_ts must be non-empty");
  const WeightSet W(mu, p);  // validates mu > 0, p > 1
  const bool r_restricted = (id == EstimateId::Z11);
  for (double r : sample_rs)
    if (r_restricted ? !(r > 0.0 && r < 1.0) : !(r >= 0.0))
      throw DomainError(r_restricted
                            ? "verify_kernel_bound: Z11 needs 0 < r < 1"
                            : "verify_kernel_bound: radii must be >= 0");

  BoundReport rep;
  rep.estimate_id = id;
  for (double t : sample_ts) {
    if (!(t >= 0.0))
      throw DomainError("verify_kernel_bound: sample times must be >= 0");
    std::vector<double> rs = sample_rs;
    if (rs.empty())
      rs = r_restricted ? std::vector<double>{0.25, 0.5, 0.75}
                        : bound_scan_radii(t);
    for (double r : rs) {
      try {
        rep.samples.push_back({t, r, kernel_bound_value(id, W, q, t, r)});
      } catch (const NumericError&) {
        ++rep.excluded_samples;
      }
    }
  }
  finalize(rep, "verify_kernel_bound");
  return rep;
}

BoundReport verify_helper_inequality(EstimateId id,
                                     const HelperParams& params) {
  if (id != EstimateId::Z17 && id != EstimateId::Z25)
    throw DomainError("verify_helper_inequality: estimate must be Z17 or Z25");
  BoundReport rep;
  rep.estimate_id = id;
  if (id == EstimateId::Z17) {
    if (!(params.kappa > 1.0))
      throw DomainError("verify_helper_inequality: Z17 needs kappa > 1");
    std::vector<double> ts = params.ts.empty() ? default_scan_ts() : params.ts;
    for (double t : ts) {
      if (!(t >= 0.0))
        throw DomainError("verify_helper_inequality: times must be >= 0");
      std::vector<double> rs =
          params.rs.empty() ? bound_scan_radii(t) : params.rs;
      for (double r : rs) {
        if (!(r >= 0.0))
          throw DomainError("verify_helper_inequality: radii must be >= 0");
        try {
          rep.samples.push_back({t, r, z17_value(params.kappa, t, r)});
        } catch (const NumericError&) {
          ++rep.excluded_samples;
        }
      }
    }
  } else {
    if (!(params.q > 1.0))
      throw DomainError("verify_helper_inequality: Z25 needs q > 1");
    const WeightSet W(params.mu, params.p);
    std::vector<double> ts =
        params.ts.empty() ? std::vector<double>{2.0, 20.0, 200.0} : params.ts;
    std::vector<double> rs =
        params.rs.empty() ? std::vector<double>{0.25, 0.5, 0.75} : params.rs;
    for (double r : rs)
      if (!(r > 0.0 && r < 1.0))
        throw DomainError("verify_helper_inequality: Z25 needs 0 < r < 1");
    for (double t : ts) {
      if (!(t > 0.0))
        throw DomainError("verify_helper_inequality: Z25 needs t > 0");
      for (double r : rs) {
        try {
          rep.samples.push_back({t, r, z25_value(W, params.q, t, r)});
        } catch (const NumericError&) {
          ++rep.excluded_samples;
        }
      }
    }
  }
  finalize(rep, "verify_helper_inequality");
  return rep;
}

BoundReport y20_bound_report(int n, double p, const std::vector<double>& ts) {
  BoundReport rep;
  rep.estimate_id = EstimateId::Y20;
  for (const auto& [t, ratio] : y20_ratio_scan(n, p, ts))
    rep.samples.push_back({t, 0.0, ratio});
  finalize(rep, "y20_bound_report");
  return rep;
}

LifespanSweep lifespan_sweep(const ParamPoint& pt,
                             const std::vector<double>& eps_list,
                             const SweepPolicy& policy) {
  if (classify(pt) != RegionClass::BlowupY4)
    throw NotInBlowupRegion(
        "lifespan_sweep: (n, p, q) must classify as BlowupY4");
  const double E = blowup_lifespan_exponent(pt);

  LifespanSweep out;
  out.theory_slope = -E;

  if (!policy.synthetic.empty()) {
    std::vector<double> eps;
    for (const auto& [e, T] : policy.synthetic) {
      eps.push_back(e);
      out.rows.push_back({e, T, T, T});
    }
    check_span(eps, "lifespan_sweep");
    std::sort(out.rows.begin(), out.rows.end(),
              [](const LifespanRow& a, const LifespanRow& b) {
                return a.eps < b.eps;
              });
    std::vector<std::pair<double, double>> pts;
    for (const LifespanRow& row : out.rows) pts.push_back({row.eps, row.t_mid});
    out.fit = fit_power_law(pts);
    out.fit.channel = "synthetic";
    return out;
  }

  check_span(eps_list, "lifespan_sweep");
  if (pt.n != 3)
    throw DomainError("lifespan_sweep: solver sweeps require n = 3");
  if (!(policy.h > 0.0) || !(policy.calib_horizon > policy.h) ||
      !(policy.horizon_factor >= 1.0) || policy.max_calib_doublings < 0)
    throw DomainError("lifespan_sweep: bad grid policy");

  std::vector<double> eps = eps_list;
  std::sort(eps.begin(), eps.end(), std::greater<double>());
  const DataSet data =
      DataSet::default_bumps(policy.amplitude, policy.support);
  MarchOptions run_opt;
  run_opt.track_norms = false;
  run_opt.track_fg = false;

  // Calibrate on the largest eps, doubling the horizon until blow-up.
  const double eps_hi = eps.front();
  SolveReport rep_hi;
  double horizon = policy.calib_horizon;
  bool detected = false;
  for (int attempt = 0; attempt <= policy.max_calib_doublings; ++attempt) {
    CharacteristicGrid grid =
        CharacteristicGrid::for_horizon(policy.h, horizon, policy.support);
    MarchOptions opt = run_opt;
    opt.confirm_bracket = policy.confirm_extreme;
    rep_hi = march(eps_hi, data, grid, pt.p, pt.q, policy.blowup_threshold,
                   opt);
    if (rep_hi.outcome == Outcome::BlowupDetected) {
      detected = true;
      break;
    }
    if (rep_hi.outcome == Outcome::NumericalDivergence)
      throw NumericError("lifespan_sweep: fields left the finite range at eps " +
                         std::to_string(eps_hi));
    horizon *= 2.0;
  }
  if (!detected)
    throw HorizonTooShort(
        eps_hi, "lifespan_sweep: no blow-up by t = " + std::to_string(horizon) +
                    " at eps " + std::to_string(eps_hi));
  out.extreme_confirmed = rep_hi.bracket_confirmed;
  out.rows.push_back({eps_hi, rep_hi.t_low, rep_hi.t_high,
                      0.5 * (rep_hi.t_low + rep_hi.t_high)});

  const double c_hat = out.rows.front().t_mid * std::pow(eps_hi, E);
  for (std::size_t i = 1; i < eps.size(); ++i) {
    const double e = eps[i];
    const double hz = policy.horizon_factor * c_hat * std::pow(e, -E);
    CharacteristicGrid grid =
        CharacteristicGrid::for_horizon(policy.h, hz, policy.support);
    SolveReport rep =
        march(e, data, grid, pt.p, pt.q, policy.blowup_threshold, run_opt);
    if (rep.outcome == Outcome::CompletedHorizon)
      throw HorizonTooShort(
          e, "lifespan_sweep: no blow-up by t = " + std::to_string(hz) +
                 " at eps " + std::to_string(e));
    if (rep.outcome == Outcome::NumericalDivergence)
      throw NumericError("lifespan_sweep: fields left the finite range at eps " +
                         std::to_string(e));
    out.rows.push_back({e, rep.t_low, rep.t_high,
                        0.5 * (rep.t_low + rep.t_high)});
  }

  std::sort(out.rows.begin(), out.rows.end(),
            [](const LifespanRow& a, const LifespanRow& b) {
              return a.eps < b.eps;
            });
  std::vector<std::pair<double, double>> pts;
  for (const LifespanRow& row : out.rows) pts.push_back({row.eps, row.t_mid});
  out.fit = fit_power_law(pts);
  out.fit.channel = "pde-march";
  return out;
}

std::vector<PositivityRow> positivity_check_y19(const SolveReport& run,
                                                double eps,
                                                const DataSet& data) {
  if (!(eps >= 0.0))
    throw DomainError("positivity_check_y19: eps must be >= 0");
  for (const RadialProfile* prof : {&data.f, &data.g, &data.ft, &data.gt})
    if (prof->amplitude < 0.0)
      throw DomainError("positivity_check_y19: profiles must be non-negative");

  std::vector<const FieldState*> levels;
  for (const auto& [lvl, state] : run.snapshots)
    if (state.t() >= kLogSqrt2 - 1e-12) levels.push_back(&state);
  if (levels.empty())
    throw InsufficientRun(
        "positivity_check_y19: run has no snapshots past t = log sqrt(2)");

  const double support = std::max(data.f.support_radius, data.g.support_radius);
  QuadOptions opt{1e-12, 1e-18, 4000};
  const double inner = integrate(
      [&](double r) {
        return (data.f.value(r) + data.g.value(r)) * phi1(3, r) * r * r;
      },
      0.0, support, opt);
  const double rhs = 0.25 * eps * 4.0 * kPi * inner;

  std::vector<PositivityRow> rows;
  for (const FieldState* state : levels) {
    const double t = state->t();
    const int m = static_cast<int>(state->w.size()) - 1;
    double acc = 0.0;
    for (int j = 1; j <= m; ++j) {
      const double wv = state->w(j);
      if (wv == 0.0) continue;  // exact outside the cone; exp would overflow
      const double r = j * state->h;
      const double term = wv * std::exp(log_phi1(3, r) - t) * r * r;
      acc += (j == m) ? 0.5 * term : term;
    }
    rows.push_back({t, 4.0 * kPi * state->h * acc, rhs});
  }
  return rows;
}

}  // namespace wavesys

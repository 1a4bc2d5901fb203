#include <doctest.h>

#include <cmath>
#include <vector>

#include "wavesys/ode_lab.hpp"

using namespace wavesys;

namespace {

ComparisonParams undamped_base() {
  // F'' = G^q, G'' = (F')^p with no decay factors and no forcing.
  ComparisonParams c;
  c.p = 2.0;
  c.q = 2.0;
  c.A = 1.0;
  c.B = 1.0;
  c.alpha = 0.0;
  c.beta = 0.0;
  c.a = 0.0;
  c.kappa = 0.0;
  return c;
}

std::vector<ComparisonState> power_trajectory(double coef, double expo,
                                              double slope0) {
  std::vector<ComparisonState> traj;
  for (double t = 0.0; t <= 5.0 + 1e-9; t += 0.05) {
    ComparisonState s;
    s.t = t;
    s.G = coef * std::pow(t, expo);
    s.Gp = slope0;
    traj.push_back(s);
  }
  return traj;
}

}  // namespace

TEST_CASE("undamped blow-up time against the frozen reference") {
  // Reference 2.87555399269 for F''=G^2, G''=(F')^2, (F,F',G,G')=(0,0,0,1),
  // obtained by classical RK4 step-doubling until successive halvings agreed
  // to 1e-6; the adaptive integrator must land in the same interval.
  ComparisonState init;
  init.Gp = 1.0;
  OdeRun run = integrate_comparison(undamped_base(), init, 100.0, 1e-10);
  REQUIRE(run.estimate.status == BlowupStatus::Blowup);
  const double mid = 0.5 * (run.estimate.t_low + run.estimate.t_high);
  CHECK(mid == doctest::Approx(2.87555399269).epsilon(2e-5));

  // Documented bracket contract: width <= tol * t_low (small slack for the
  // final widening step).
  CHECK(run.estimate.t_high - run.estimate.t_low <=
        2.0 * 1e-10 * run.estimate.t_low + 1e-12);

  // Refinement stability: two decades tighter tolerance moves the estimate
  // by far less than the oracle interval.
  OdeRun fine = integrate_comparison(undamped_base(), init, 100.0, 1e-12);
  REQUIRE(fine.estimate.status == BlowupStatus::Blowup);
  const double mid_fine = 0.5 * (fine.estimate.t_low + fine.estimate.t_high);
  CHECK(std::abs(mid - mid_fine) < 1e-6);
}

TEST_CASE("trajectory structure") {
  ComparisonState init;
  init.F = 0.25;
  init.Fp = 0.125;
  init.G = 0.5;
  init.Gp = 2.0;
  OdeRun run = integrate_comparison(undamped_base(), init, 1.0, 1e-10);
  REQUIRE(!run.trajectory.empty());
  const ComparisonState& s0 = run.trajectory.front();
  CHECK(s0.t == init.t);
  CHECK(s0.F == init.F);
  CHECK(s0.Fp == init.Fp);
  CHECK(s0.G == init.G);
  CHECK(s0.Gp == init.Gp);
  for (std::size_t i = 1; i < run.trajectory.size(); ++i)
    CHECK(run.trajectory[i].t > run.trajectory[i - 1].t);

  // Equality system with nonnegative data: F', G' and hence F, G all grow.
  for (std::size_t i = 1; i < run.trajectory.size(); ++i) {
    CHECK(run.trajectory[i].Fp >= run.trajectory[i - 1].Fp - 1e-12);
    CHECK(run.trajectory[i].G >= run.trajectory[i - 1].G - 1e-12);
  }
}

TEST_CASE("horizon completion is reported, not misread as blow-up") {
  // Heavy damping alpha = beta = 3 with a linear barrier violates the growth
  // condition (4 + 3 - 9 < 0): G stays essentially linear forever.
  ComparisonParams c = comparison_parameters(ParamPoint(3, 2.0, 2.0), 1, 1, 1);
  c.kappa = 0.0;
  ComparisonState init;
  init.Gp = 0.25;
  OdeRun run = integrate_comparison(c, init, 1e4, 1e-10);
  CHECK(run.estimate.status == BlowupStatus::NoBlowupByHorizon);
  CHECK(run.estimate.t_low == 1e4);
  CHECK(run.estimate.t_high == 1e4);
  const ComparisonState& last = run.trajectory.back();
  CHECK(last.t == doctest::Approx(1e4).epsilon(1e-12));
  // Linear-ish growth: nowhere near the doubling cascade of a blow-up.
  CHECK(last.G <= 2.0 * init.Gp * 1e4);
}

TEST_CASE("argument validation") {
  ComparisonState init;
  init.Gp = 1.0;
  ComparisonParams c = undamped_base();

  ComparisonParams bad = c;
  bad.A = -1.0;
  CHECK_THROWS_AS(integrate_comparison(bad, init, 1.0, 1e-10), DomainError);
  bad = c;
  bad.p = 0.0;
  CHECK_THROWS_AS(integrate_comparison(bad, init, 1.0, 1e-10), DomainError);

  ComparisonState flat;  // G'(0) = 0 never leaves the origin
  CHECK_THROWS_AS(integrate_comparison(c, flat, 1.0, 1e-10), DomainError);
  CHECK_THROWS_AS(integrate_comparison(c, init, 0.0, 1e-10), DomainError);
  CHECK_THROWS_AS(integrate_comparison(c, init, 1.0, 0.0), DomainError);
}

TEST_CASE("lower-bound fit recovers exact power laws") {
  // G = 2 t^2 sampled densely: fitted (kappa, a) must be (2, 2).
  auto [kap, a] = verify_lower_bound_y11(power_trajectory(2.0, 2.0, 0.0), 0.5);
  CHECK(kap == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(a == doctest::Approx(2.0).epsilon(1e-12));

  // Default threshold max{1, G(0)/G'(0)} = 1 for a linear trajectory.
  auto traj = power_trajectory(3.0, 1.0, 3.0);
  auto [kap1, a1] = verify_lower_bound_y11(traj);
  CHECK(kap1 == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(a1 == doctest::Approx(1.0).epsilon(1e-12));

  CHECK_THROWS_AS(verify_lower_bound_y11({}), InsufficientData);
  CHECK_THROWS_AS(verify_lower_bound_y11(power_trajectory(2, 2, 0), 10.0),
                  InsufficientData);
  CHECK_THROWS_AS(verify_lower_bound_y11(power_trajectory(-2, 2, 0), 0.5),
                  DomainError);
  // Default-threshold overload needs a positive starting slope.
  CHECK_THROWS_AS(verify_lower_bound_y11(power_trajectory(2, 2, 0)),
                  DomainError);
}

TEST_CASE("lower-bound fit on a forced blow-up run") {
  // Constant forcing (a = 2) at the damped parameters pushes G onto a
  // quadratic ramp before the blow-up cascade; the fitted exponent must
  // certify at least the ramp.
  ComparisonParams c = comparison_parameters(ParamPoint(3, 2.0, 2.0), 1, 1, 1);
  c.kappa = 0.04;
  ComparisonState init;
  init.Gp = 0.04;
  OdeRun run = integrate_comparison(c, init, 1e9, 1e-10);
  REQUIRE(run.estimate.status == BlowupStatus::Blowup);
  auto [kap, a] = verify_lower_bound_y11(run.trajectory, 1.0);
  CHECK(kap > 0.0);
  CHECK(a >= 1.8);
}

TEST_CASE("kappa sweep through the initial-slope channel") {
  // For the undamped system with G(0)' = kappa the lemma predicts
  // T ~ kappa^-(pq-1)/(p+2+(pq-1)-0) = kappa^-3/7.
  ScalingFit fit = kappa_sweep(undamped_base(), {0.5, 1.0, 2.0, 4.0, 8.0},
                               100.0, KappaChannel::InitialSlope);
  CHECK(fit.channel == "initial-slope");
  CHECK(fit.points.size() == 5);
  CHECK(fit.slope == doctest::Approx(-3.0 / 7.0).epsilon(0.05));
  CHECK(fit.r_squared > 0.999);
  // Larger slope, earlier blow-up: fitted T monotone decreasing in kappa.
  for (std::size_t i = 1; i < fit.points.size(); ++i) {
    CHECK(fit.points[i].first > fit.points[i - 1].first);
    CHECK(fit.points[i].second < fit.points[i - 1].second);
  }
}

TEST_CASE("kappa sweep through the forcing channel") {
  // Constant forcing at the (3,2,2) comparison parameters: T ~ kappa^-3.
  ComparisonParams base =
      comparison_parameters(ParamPoint(3, 2.0, 2.0), 1, 1, 1);
  ScalingFit fit =
      kappa_sweep(base, {2.5e-3, 5e-3, 1e-2, 2e-2, 4e-2}, 1e11,
                  KappaChannel::Forcing);
  CHECK(fit.channel == "eps-forcing");
  CHECK(fit.slope == doctest::Approx(-3.0).epsilon(1e-3));
  CHECK(fit.r_squared > 0.999999);
}

TEST_CASE("kappa sweep failure modes") {
  ComparisonParams damped =
      comparison_parameters(ParamPoint(3, 2.0, 2.0), 1, 1, 1);
  // Moderate initial slopes cannot overcome alpha = beta = 3 damping and
  // those runs reach the horizon; kappa = 8 feeds back hard enough to blow
  // up anyway.  The sweep must name exactly the runs that failed.
  std::vector<double> ks = {0.5, 1.0, 2.0, 8.0};
  try {
    kappa_sweep(damped, ks, 1e3, KappaChannel::InitialSlope);
    FAIL("expected PartialFitError");
  } catch (const PartialFitError& e) {
    REQUIRE(e.failed_kappas.size() == 3);
    CHECK(e.failed_kappas[0] == 0.5);
    CHECK(e.failed_kappas[1] == 1.0);
    CHECK(e.failed_kappas[2] == 2.0);
  }

  CHECK_THROWS_AS(kappa_sweep(undamped_base(), {1.0, 2.0, 4.0}, 10.0),
                  DomainError);  // too few points
  CHECK_THROWS_AS(kappa_sweep(undamped_base(), {1.0, 1.2, 1.5, 2.0}, 10.0),
                  DomainError);  // span below 1.2 decades
  CHECK_THROWS_AS(kappa_sweep(undamped_base(), {-1.0, 1.0, 4.0, 16.0}, 10.0),
                  DomainError);
}

TEST_CASE("power-law fit") {
  std::vector<std::pair<double, double>> pts;
  for (double x : {0.5, 1.0, 2.0, 4.0, 8.0}) pts.emplace_back(x, 3.0 * std::pow(x, 2.5));
  ScalingFit fit = fit_power_law(pts);
  CHECK(fit.slope == doctest::Approx(2.5).epsilon(1e-13));
  CHECK(std::exp(fit.intercept) == doctest::Approx(3.0).epsilon(1e-13));
  CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(fit.points == pts);
  CHECK(fit.channel.empty());

  // A kinked relation is not a power law; r^2 must say so.
  ScalingFit bent = fit_power_law({{1.0, 1.0}, {2.0, 8.0}, {4.0, 9.0}});
  CHECK(bent.r_squared < 0.999);

  CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, 2.0}}), InsufficientData);
  CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, 2.0}, {0.0, 3.0}}),
                  DomainError);
  CHECK_THROWS_AS(fit_power_law({{1.0, 1.0}, {2.0, -2.0}, {3.0, 3.0}}),
                  DomainError);
}

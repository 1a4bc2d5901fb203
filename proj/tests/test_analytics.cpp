#include <doctest.h>

#include <cmath>

#include "wavesys/analytics.hpp"

using namespace wavesys;

namespace {

// Independent residual of the defining quadratic of the critical power:
// (n-1) q^2 - (n+1) q - 2.
double strauss_quadratic(int n, double q) {
  return (n - 1.0) * q * q - (n + 1.0) * q - 2.0;
}

}  // namespace

TEST_CASE("strauss exponent closed forms") {
  // n = 2: positive root of q^2 - 3q - 2 = 0.
  CHECK(strauss_exponent(2) == doctest::Approx((3.0 + std::sqrt(17.0)) / 2.0)
                                   .epsilon(1e-15));
  // n = 3: positive root of 2q^2 - 4q - 2 = 0, i.e. 1 + sqrt(2).
  CHECK(strauss_exponent(3) ==
        doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-15));

  for (int n = 2; n <= 8; ++n) {
    const double q0 = strauss_exponent(n);
    CHECK(q0 > 1.0);
    CHECK(std::abs(strauss_quadratic(n, q0)) < 1e-12);
  }
  // Monotone decreasing in the dimension.
  for (int n = 2; n <= 7; ++n)
    CHECK(strauss_exponent(n) > strauss_exponent(n + 1));

  CHECK_THROWS_AS(strauss_exponent(1), DomainError);
}

TEST_CASE("glassey exponent") {
  CHECK(glassey_exponent(2) == 3.0);
  CHECK(glassey_exponent(3) == 2.0);
  CHECK(glassey_exponent(4) == doctest::Approx(5.0 / 3.0).epsilon(1e-16));
  CHECK_THROWS_AS(glassey_exponent(1), DomainError);
}

TEST_CASE("param point validation") {
  CHECK_NOTHROW(ParamPoint(2, 1.5, 1.5));
  CHECK_THROWS_AS(ParamPoint(1, 2.0, 2.0), DomainError);
  CHECK_THROWS_AS(ParamPoint(3, 1.0, 2.0), DomainError);
  CHECK_THROWS_AS(ParamPoint(3, 2.0, 0.5), DomainError);
}

TEST_CASE("curve residuals") {
  // ((n-1)p/2 - 1)(pq - 1) - (p + 2) at hand-checked points.
  CHECK(curve_residual(CriticalCurve::B5, ParamPoint(3, 2.0, 2.0)) == -1.0);
  CHECK(curve_residual(CriticalCurve::B5, ParamPoint(3, 2.0, 2.5)) == 0.0);
  CHECK(curve_residual(CriticalCurve::B5, ParamPoint(2, 2.0, 2.0)) == -4.0);

  // With p = q the B13 residual vanishes exactly at the n = 3 critical power:
  // (q0 + 2 + 1/q0)/(q0^2 - 1) = 1 when q0 = 1 + sqrt(2).
  const double q0 = strauss_exponent(3);
  CHECK(std::abs(curve_residual(CriticalCurve::B13, ParamPoint(3, q0, q0))) <
        1e-10);
  // Symmetric in (p, q) by construction of the max.
  CHECK(curve_residual(CriticalCurve::B13, ParamPoint(3, 2.0, 3.0)) ==
        curve_residual(CriticalCurve::B13, ParamPoint(3, 3.0, 2.0)));

  // B14: q - (4/((n-1)p - 2) + 1); zero at n = 3, p = 2, q = 3.
  CHECK(curve_residual(CriticalCurve::B14, ParamPoint(3, 2.0, 3.0)) == 0.0);
  CHECK_THROWS_AS(curve_residual(CriticalCurve::B14, ParamPoint(2, 2.0, 2.0)),
                  SingularCurveParameter);
}

TEST_CASE("region classification") {
  CHECK(classify(ParamPoint(3, 2.0, 2.0)) == RegionClass::BlowupY4);
  CHECK(classify(ParamPoint(2, 2.0, 2.0)) == RegionClass::BlowupY4);
  CHECK(classify(ParamPoint(3, 2.5, 3.0)) == RegionClass::GlobalZ7Candidate);

  // Points exactly on the dividing curve take precedence over both regions.
  CHECK(classify(ParamPoint(3, 2.0, 2.5)) == RegionClass::CriticalB5);

  // Negative residual alone is not enough: the theorem also needs
  // p < 2n/(n-1). At (2, 4, 1.5) the residual is -1 but p = 2n/(n-1) = 4.
  CHECK(curve_residual(CriticalCurve::B5, ParamPoint(2, 4.0, 1.5)) == -1.0);
  CHECK(classify(ParamPoint(2, 4.0, 1.5)) == RegionClass::Unknown);

  // The global-existence statement is three-dimensional only.
  CHECK(classify(ParamPoint(4, 2.5, 3.0)) == RegionClass::Unknown);
  // ... and requires q > 2 and 2 < p < 3.
  CHECK(classify(ParamPoint(3, 2.9, 1.5)) == RegionClass::Unknown);
  CHECK(classify(ParamPoint(3, 3.5, 3.0)) == RegionClass::Unknown);

  CHECK(std::string(to_string(RegionClass::BlowupY4)) == "BlowupY4");
  CHECK(std::string(to_string(RegionClass::GlobalZ7Candidate)) ==
        "GlobalZ7Candidate");
}

TEST_CASE("lifespan exponent values") {
  // (3,2,2): denominator p+2 - ((n-1)p/2 - 1)(pq-1) = 4 - 3 = 1, E = 6.
  CHECK(blowup_lifespan_exponent(ParamPoint(3, 2.0, 2.0)) == 6.0);
  // (2,2,2): denominator 4 - 0 = 4, E = 3/2.
  CHECK(blowup_lifespan_exponent(ParamPoint(2, 2.0, 2.0)) == 1.5);

  // Sharpness identity: the dedicated n-only form agrees exactly.
  CHECK(blowup_lifespan_exponent(ParamPoint(3, 2.0, 2.0)) ==
        b6_lifespan_exponent(3));
  CHECK(blowup_lifespan_exponent(ParamPoint(2, 2.0, 2.0)) ==
        b6_lifespan_exponent(2));

  // Independent recomputation at an off-center blow-up point.
  {
    const double n = 3, p = 2.0, q = 2.2;
    const double denom = p + 2.0 - ((n - 1.0) * p / 2.0 - 1.0) * (p * q - 1.0);
    CHECK(blowup_lifespan_exponent(ParamPoint(3, p, q)) ==
          doctest::Approx(p * (p * q - 1.0) / denom).epsilon(1e-15));
  }

  CHECK_THROWS_AS(blowup_lifespan_exponent(ParamPoint(3, 2.5, 3.0)),
                  NotInBlowupRegion);
  CHECK_THROWS_AS(blowup_lifespan_exponent(ParamPoint(3, 2.0, 2.5)),
                  NotInBlowupRegion);
  CHECK_THROWS_AS(b6_lifespan_exponent(4), DomainError);
}

TEST_CASE("comparison parameter mapping") {
  const ComparisonParams c =
      comparison_parameters(ParamPoint(3, 2.0, 2.0), 1.5, 2.5, 0.1);
  CHECK(c.p == 2.0);
  CHECK(c.q == 2.0);
  CHECK(c.A == 1.5);
  CHECK(c.B == 2.5);
  CHECK(c.alpha == 3.0);  // n(q-1)
  CHECK(c.beta == 3.0);   // n(p-1)
  CHECK(c.a == 2.0);      // 2 - (n-1)(p-2)/2
  CHECK(c.kappa == doctest::Approx(1.5 * 0.01).epsilon(1e-15));  // A eps^p

  // n = 2 changes a and the decay rates.
  const ComparisonParams c2 =
      comparison_parameters(ParamPoint(2, 2.0, 2.0), 1.0, 1.0, 0.5);
  CHECK(c2.alpha == 2.0);
  CHECK(c2.beta == 2.0);
  CHECK(c2.a == 2.0);

  CHECK_THROWS_AS(comparison_parameters(ParamPoint(3, 2.5, 3.0), 1, 1, 0.1),
                  NotInBlowupRegion);
  CHECK_THROWS_AS(comparison_parameters(ParamPoint(3, 2.0, 2.0), 0.0, 1, 0.1),
                  DomainError);
  CHECK_THROWS_AS(comparison_parameters(ParamPoint(3, 2.0, 2.0), 1, 1, 0.0),
                  DomainError);
}

TEST_CASE("scaling exponent of the comparison lemma") {
  // (pq-1)/(p+2 + a(pq-1) - (beta + alpha p)), hand-evaluated:
  // p=q=2, alpha=beta=3, a=2: 3/(4 + 6 - 9) = 3.
  CHECK(lemma_y8_exponent(2, 2, 3, 3, 2) == 3.0);
  // p=q=2, alpha=beta=2, a=2: 3/(4 + 6 - 6) = 3/4.
  CHECK(lemma_y8_exponent(2, 2, 2, 2, 2) == 0.75);
  // The undamped base case with a = 1 (linear lower barrier): 3/7.
  CHECK(lemma_y8_exponent(2, 2, 0, 0, 1) ==
        doctest::Approx(3.0 / 7.0).epsilon(1e-15));

  // Too-weak barrier: denominator 4 + 1.5 - 9 < 0.
  CHECK_THROWS_AS(lemma_y8_exponent(2, 2, 3, 3, 0.5), ConditionY12Violated);
}

TEST_CASE("weight exponent window") {
  const MuWindow w = mu_window(2.5, 3.0);
  CHECK(w.lo == 0.5);
  CHECK(w.hi == 1.0);
  CHECK(w.chosen_mu == 0.75);

  // The chosen midpoint satisfies the integrability inequality
  // mu/p + 1 - (p-2+mu) q < -1; at (2.5, 3) the left side is -2.45.
  CHECK(w.chosen_mu / 2.5 + 1.0 - (2.5 - 2.0 + w.chosen_mu) * 3.0 ==
        doctest::Approx(-2.45).epsilon(1e-15));

  CHECK_THROWS_AS(mu_window(2.1, 2.1), EmptyMuWindow);
  CHECK_THROWS_AS(mu_window(2.5, 2.0), DomainError);  // q must exceed 2
  CHECK_THROWS_AS(mu_window(3.0, 3.0), DomainError);  // p must stay below 3
  CHECK_THROWS_AS(mu_window(1.5, 3.0), DomainError);
}

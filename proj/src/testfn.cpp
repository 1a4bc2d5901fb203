#include "wavesys/testfn.hpp"

#include <algorithm>
#include <cmath>

#include "wavesys/quadrature.hpp"

namespace wavesys {

namespace {
constexpr double kPi = 3.14159265358979323846;

// Asymptotic series of I0: exp(x)/sqrt(2 pi x) * sum_k c_k with
// c_{k+1} = c_k (2k+1)^2 / (8 x (k+1)); summed to its smallest term.
double i0_asymptotic_series(double x) {
  double term = 1.0, sum = 1.0;
  for (int k = 0; k < 40; ++k) {
    const double next = term * (2.0 * k + 1.0) * (2.0 * k + 1.0) /
                        (8.0 * x * (k + 1.0));
    if (next >= term || next < 1e-18 * sum) {
      sum += (next < term) ? next : 0.0;
      break;
    }
    sum += next;
    term = next;
  }
  return sum;
}

double i0_power_series(double x) {
  const double z = 0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= z / (static_cast<double>(k) * k);
    sum += term;
    if (term < 1e-18 * sum) break;
  }
  return sum;
}
}  // namespace

double sphere_area(int n) {
  if (n < 1) throw DomainError("sphere_area: n must be >= 1");
  return 2.0 * std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n);
}

double bessel_i0(double x) {
  x = std::abs(x);
  if (x <= 15.0) return i0_power_series(x);
  return std::exp(x) / std::sqrt(2.0 * kPi * x) * i0_asymptotic_series(x);
}

double log_bessel_i0(double x) {
  x = std::abs(x);
  if (x <= 15.0) return std::log(i0_power_series(x));
  return x - 0.5 * std::log(2.0 * kPi * x) + std::log(i0_asymptotic_series(x));
}

double phi1(int n, double r) {
  if (r < 0.0) throw DomainError("phi1: radius must be non-negative");
  if (n < 2) throw DomainError("phi1: n must be >= 2");
  if (n == 3) {
    if (r < 1e-6) return 4.0 * kPi * (1.0 + r * r / 6.0);
    return 4.0 * kPi * std::sinh(r) / r;
  }
  if (n == 2) return 2.0 * kPi * bessel_i0(r);
  // General dimension: |S^{n-2}| * int_0^pi exp(r cos(theta)) sin(theta)^{n-2}.
  const double coeff = sphere_area(n - 1);
  const double integral = integrate(
      [r, n](double th) {
        return std::exp(r * std::cos(th)) *
               std::pow(std::sin(th), static_cast<double>(n - 2));
      },
      0.0, kPi, QuadOptions{1e-12, 1e-300, 20000});
  return coeff * integral;
}

double log_phi1(int n, double r) {
  if (r < 0.0) throw DomainError("log_phi1: radius must be non-negative");
  if (n < 2) throw DomainError("log_phi1: n must be >= 2");
  if (n == 3) {
    if (r < 1e-12) return std::log(4.0 * kPi);
    // log(4 pi sinh(r)/r) written without overflow: sinh(r) = e^r(1-e^{-2r})/2.
    return std::log(4.0 * kPi) + r + std::log(-std::expm1(-2.0 * r)) -
           std::log(2.0 * r);
  }
  if (n == 2) return std::log(2.0 * kPi) + log_bessel_i0(r);
  const double coeff = sphere_area(n - 1);
  // Factor out e^r so the integrand stays within [0, 1].
  const double integral = integrate(
      [r, n](double th) {
        return std::exp(r * (std::cos(th) - 1.0)) *
               std::pow(std::sin(th), static_cast<double>(n - 2));
      },
      0.0, kPi, QuadOptions{1e-12, 1e-300, 20000});
  return std::log(coeff) + r + std::log(integral);
}

TestFunctionEval phi1_eval(int n, double r) { return {n, r, phi1(n, r)}; }

double psi1_weighted_norm(int n, double p, double t) {
  if (!(p > 1.0)) throw DomainError("psi1_weighted_norm: p must be > 1");
  if (t < 0.0) throw DomainError("psi1_weighted_norm: t must be >= 0");
  const double pprime = p / (p - 1.0);
  const double R = t + 1.0;
  const double log_area = std::log(sphere_area(n));
  auto log_integrand = [&](double r) {
    return pprime * (log_phi1(n, r) - t) + (n - 1.0) * std::log(r) + log_area;
  };
  // The integrand spans hundreds of orders of magnitude at large t; rescale
  // by its sampled maximum before quadrature.
  double m = -1e300;
  for (int i = 1; i <= 64; ++i) m = std::max(m, log_integrand(R * i / 64.0));
  auto f = [&](double r) {
    if (r <= 0.0) return 0.0;
    return std::exp(log_integrand(r) - m);
  };
  const double integral = integrate(f, 0.0, R, QuadOptions{1e-10, 1e-300, 20000});
  return std::exp((m + std::log(integral)) / pprime);
}

std::vector<std::pair<double, double>> y20_ratio_scan(
    int n, double p, const std::vector<double>& ts) {
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (ts[i] < 0.0) throw DomainError("y20_ratio_scan: times must be >= 0");
    if (i > 0 && ts[i] < ts[i - 1])
      throw DomainError("y20_ratio_scan: times must be increasing");
  }
  const double decay = (n - 1.0) * (0.5 - 1.0 / p);
  std::vector<std::pair<double, double>> out;
  out.reserve(ts.size());
  for (double t : ts) {
    const double ratio = psi1_weighted_norm(n, p, t) / std::pow(t + 1.0, decay);
    out.emplace_back(t, ratio);
  }
  return out;
}

}  // namespace wavesys

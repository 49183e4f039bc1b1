#include "cornerflow/gas.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "cornerflow/errors.hpp"
#include "doctest.h"

using namespace cornerflow;

namespace {

// Independent oracle for the sonic momentum: the momentum-form Bernoulli
// function F(rho) = m/rho^2 + pi(rho) has a double root at the sonic state.
// Locate min_rho F by ternary search and bisect in m for min F = B.
double sonic_momentum_oracle(double gamma, double B) {
  auto F = [&](double rho, double m) {
    return m / (rho * rho) + gamma / (gamma - 1.0) * std::pow(rho, gamma - 1.0);
  };
  auto minF = [&](double m) {
    double lo = 1e-8, hi = std::pow((gamma - 1.0) / gamma * B, 1.0 / (gamma - 1.0));
    for (int it = 0; it < 300; ++it) {
      double a = lo + (hi - lo) / 3.0, b = hi - (hi - lo) / 3.0;
      if (F(a, m) < F(b, m)) hi = b; else lo = a;
    }
    return F(0.5 * (lo + hi), m);
  };
  double lo = 0.0, hi = 10.0 * B;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (minF(mid) < B) lo = mid; else hi = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace

TEST_CASE("pressure: polytropic law") {
  auto g2 = GasModel::polytropic(2.0, 2.0);
  CHECK(g2.pressure(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g2.pressure(0.0) == 0.0);

  auto g14 = GasModel::polytropic(1.4, 3.5);
  double expect = std::exp(1.4 * std::log(2.0));  // log/exp identity cross-check
  CHECK(g14.pressure(2.0) == doctest::Approx(2.6390158215457884).epsilon(1e-14));
  CHECK(g14.pressure(2.0) == doctest::Approx(expect).epsilon(1e-14));
  CHECK(g14.pressure(1.3) > g14.pressure(1.2));  // strictly increasing
  CHECK_THROWS_AS(g14.pressure(-0.1), std::domain_error);
}

TEST_CASE("sound_speed_sq") {
  CHECK(GasModel::polytropic(2.0, 2.0).sound_speed_sq(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(GasModel::polytropic(1.4, 3.5).sound_speed_sq(1.0) == doctest::Approx(1.4).epsilon(1e-15));
  CHECK(GasModel::polytropic(1.5, 3.0).sound_speed_sq(4.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK_THROWS_AS(GasModel::polytropic(1.4, 3.5).sound_speed_sq(0.0), std::domain_error);
}

TEST_CASE("enthalpy and its derivative") {
  CHECK(GasModel::polytropic(2.0, 2.0).enthalpy(1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(GasModel::polytropic(1.4, 3.5).enthalpy(1.0) == doctest::Approx(3.5).epsilon(1e-15));

  // d/drho enthalpy = c^2 / rho (finite-difference oracle)
  auto g = GasModel::polytropic(1.4, 3.5);
  double rho = 1.3, d = 1e-6;
  double fd = (g.enthalpy(rho + d) - g.enthalpy(rho - d)) / (2.0 * d);
  CHECK(fd == doctest::Approx(g.sound_speed_sq(rho) / rho).epsilon(1e-8));
  CHECK_THROWS_AS(g.enthalpy(-2.0), std::domain_error);
}

TEST_CASE("density_from_speed") {
  auto g = GasModel::polytropic(2.0, 2.0);
  CHECK(g.density_from_speed(0.0) == doctest::Approx(1.0).epsilon(1e-15));

  double rho1 = g.density_from_speed(1.0);
  CHECK(rho1 == doctest::Approx(0.75).epsilon(1e-15));
  // substitute back into q^2/2 + pi(rho) = B
  CHECK(0.5 * 1.0 + g.enthalpy(rho1) == doctest::Approx(2.0).epsilon(1e-14));

  double vl = g.limit_speed();
  CHECK(vl == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(g.density_from_speed(0.999 * vl) > 0.0);
  CHECK_THROWS_AS(g.density_from_speed(1.001 * vl), VacuumExceeded);
  CHECK(g.density_from_speed(0.9999999 * vl) < 1e-3);  // vacuum approach

  // strictly decreasing
  double prev = g.density_from_speed(0.0);
  for (int k = 1; k <= 50; ++k) {
    double cur = g.density_from_speed(vl * k / 51.0);
    CHECK(cur < prev);
    prev = cur;
  }
  CHECK(GasModel::polytropic(2.0, 0.5).limit_speed() == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("sonic_momentum closed form vs bisection oracle") {
  auto g = GasModel::polytropic(2.0, 2.0);
  CHECK(g.sonic_speed_sq() == doctest::Approx(4.0 / 3.0).epsilon(1e-15));
  CHECK(g.sonic_density() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(g.sonic_momentum() == doctest::Approx(8.0 / 27.0).epsilon(1e-14));
  CHECK(g.sonic_momentum() == doctest::Approx(sonic_momentum_oracle(2.0, 2.0)).epsilon(1e-9));

  auto g14 = GasModel::polytropic(1.4, 2.5);
  CHECK(g14.sonic_momentum() == doctest::Approx(sonic_momentum_oracle(1.4, 2.5)).epsilon(1e-9));

  // the sonic state satisfies Bernoulli with Mach exactly 1
  double cs2 = g.sonic_speed_sq(), rs = g.sonic_density();
  CHECK(0.5 * cs2 + g.enthalpy(rs) == doctest::Approx(2.0).epsilon(1e-10));
  CHECK(std::sqrt(cs2) / std::sqrt(g.sound_speed_sq(rs)) == doctest::Approx(1.0).epsilon(1e-10));

  // gamma -> 1+: the closed form 2B(gamma-1)/(gamma+1) keeps holding
  auto gl = GasModel::polytropic(1.0001, 2.0);
  CHECK(gl.sonic_speed_sq() ==
        doctest::Approx(2.0 * 2.0 * 0.0001 / 2.0001).epsilon(1e-12));
  CHECK(gl.sonic_momentum() == doctest::Approx(sonic_momentum_oracle(1.0001, 2.0)).epsilon(1e-6));

  CHECK_THROWS_AS(GasModel::incompressible().sonic_momentum(), NotApplicable);
}

TEST_CASE("h_div: values, monotonicity, derivative") {
  auto g = GasModel::polytropic(2.0, 2.0);
  CHECK(g.h_div(0.0) == doctest::Approx(1.0 / g.stagnation_density()).epsilon(1e-15));

  // from density_from_speed example: q=1, rho=0.75, m = (rho q)^2/2
  double m = 0.5 * 0.75 * 0.75;
  CHECK(g.h_div(m) == doctest::Approx(1.0 / 0.75).epsilon(1e-12));

  double ms = g.sonic_momentum();
  CHECK_THROWS_AS(g.h_div(ms), SonicExceeded);
  CHECK_THROWS_AS(g.h_div(1.001 * ms), SonicExceeded);

  double prev = g.h_div(0.0);
  for (int k = 1; k < 1000; ++k) {
    double cur = g.h_div(ms * k / 1000.0);
    CHECK(cur > prev);
    prev = cur;
  }

  // finite-difference oracle for h_div_prime at 0.1 m_sonic
  double m0 = 0.1 * ms, d = 1e-5 * ms;
  double fd = (g.h_div(m0 + d) - g.h_div(m0 - d)) / (2.0 * d);
  CHECK(g.h_div_prime(m0) == doctest::Approx(fd).epsilon(1e-6));
  CHECK(g.h_div_prime(0.0) > 0.0);
  CHECK(GasModel::incompressible(2.0).h_div_prime(0.123) == 0.0);
  CHECK(GasModel::incompressible(2.0).h_div(0.123) == doctest::Approx(0.5).epsilon(1e-15));
}

TEST_CASE("Bernoulli consistency invariants") {
  for (double gamma : {1.1, 1.4, 2.0}) {
    auto g = GasModel::polytropic_stagnation_unit(gamma);
    double B = g.bernoulli();
    double vl = g.limit_speed();
    for (int k = 0; k < 2000; ++k) {
      double q = vl * (k + 0.5) / 2001.0;
      double rho = g.density_from_speed(q);
      CHECK(0.5 * q * q + g.enthalpy(rho) == doctest::Approx(B).epsilon(1e-12));
    }
    double ms = g.sonic_momentum();
    for (int k = 0; k < 2000; ++k) {
      double m = ms * k / 2000.0;
      double h = g.h_div(m);
      CHECK(m * h * h + g.enthalpy(1.0 / h) == doctest::Approx(B).epsilon(1e-10));
    }
  }
}

TEST_CASE("Mach is increasing in speed and crosses 1 at the sonic momentum") {
  auto g = GasModel::polytropic(1.4, 2.5);
  double vl = g.limit_speed();
  double prev = 0.0;
  for (int k = 1; k < 300; ++k) {
    double q = 0.999 * vl * k / 300.0;
    double mach = g.mach_from_speed(q);
    CHECK(mach > prev);
    prev = mach;
  }
  // bisect Mach(q) = 1
  double lo = 0.0, hi = 0.999 * vl;
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    if (g.mach_from_speed(mid) < 1.0) lo = mid; else hi = mid;
  }
  double qs = 0.5 * (lo + hi);
  double rho = g.density_from_speed(qs);
  CHECK(0.5 * rho * rho * qs * qs == doctest::Approx(g.sonic_momentum()).epsilon(1e-8));
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(GasModel::polytropic(1.0, 2.0), ConfigError);
  CHECK_THROWS_AS(GasModel::polytropic(1.4, 0.0), ConfigError);
  CHECK_THROWS_AS(GasModel::polytropic(1.4, -1.0), ConfigError);
  CHECK_THROWS_AS(GasModel::incompressible(0.0), ConfigError);

  auto g = GasModel::polytropic(1.4, 2.5);
  CHECK(std::isfinite(g.stagnation_density()));
  CHECK(g.stagnation_density() > 0.0);
  CHECK(std::isfinite(g.limit_speed()));
  CHECK(g.limit_speed() > 0.0);
  CHECK(std::isfinite(g.sonic_momentum()));
  CHECK(g.sonic_momentum() > 0.0);

  auto gi = GasModel::incompressible(1.5);
  CHECK(gi.is_incompressible());
  CHECK(gi.density_from_speed(17.0) == 1.5);
  CHECK(gi.limit_speed() == std::numeric_limits<double>::infinity());
  CHECK(gi.mach_from_speed(3.0) == 0.0);
  CHECK_THROWS_AS(gi.pressure(1.0), NotApplicable);
  CHECK_THROWS_AS(gi.enthalpy(1.0), NotApplicable);
}

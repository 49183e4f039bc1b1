#include "cornerflow/farfield.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "cornerflow/conformal.hpp"
#include "cornerflow/errors.hpp"
#include "doctest.h"

using namespace cornerflow;

namespace {
constexpr double kPi = std::numbers::pi;

// density expansion at infinity (test-side oracle):
// rho = rho_inf (1 + beta (Gamma/2pi) (1-beta^2) y / ((x^2+beta^2 y^2) v_inf))
double rho_expansion(double x, double y, const FarFieldState& s) {
  double b = s.pg_factor;
  if (s.v_inf == 0.0) return s.rho_inf;
  return s.rho_inf *
         (1.0 + b * s.gamma / (2.0 * kPi) * (1.0 - b * b) * y / ((x * x + b * b * y * y) * s.v_inf));
}

FarFieldState manual_state(double v, double rho, double mach, double gamma, double c = 0.0) {
  FarFieldState s;
  s.v_inf = v;
  s.rho_inf = rho;
  s.mach_inf = mach;
  s.pg_factor = std::sqrt(1.0 - mach * mach);
  s.gamma = gamma;
  s.psi_const = c;
  return s;
}
}  // namespace

TEST_CASE("state construction and invariants") {
  auto gas = gas_for_mach(1.4, 0.3, 1.0);
  auto s = make_farfield(gas, 1.0, 2.0);
  CHECK(s.mach_inf == doctest::Approx(0.3).epsilon(1e-12));
  CHECK(s.pg_factor * s.pg_factor + s.mach_inf * s.mach_inf == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(s.rho_inf == doctest::Approx(gas.density_from_speed(1.0)).epsilon(1e-15));

  auto si = make_farfield(GasModel::incompressible(), 1.0, 0.0);
  CHECK(si.mach_inf == 0.0);
  CHECK(si.pg_factor == 1.0);
  CHECK_THROWS_AS(gas_for_mach(1.4, 1.2, 1.0), ConfigError);
}

TEST_CASE("velocity_expansion examples") {
  auto s0 = manual_state(0.7, 1.0, 0.0, 0.0);
  for (double x : {-3.0, 1.0, 10.0}) {
    auto v = velocity_expansion(x, 2.0, s0);
    CHECK(v.x == 0.7);
    CHECK(v.y == 0.0);
  }

  // unit point vortex at M = 0
  auto sv = manual_state(0.0, 1.0, 0.0, 2.0 * kPi);
  auto v = velocity_expansion(1.0, 0.0, sv);
  CHECK(v.x == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(v.y == doctest::Approx(1.0).epsilon(1e-14));

  // beta = 0.8, Gamma = 2pi at (0, 1): v = (v_inf - 1.25, 0)
  auto sb = manual_state(2.0, 1.0, 0.6, 2.0 * kPi);
  auto vb = velocity_expansion(0.0, 1.0, sb);
  CHECK(vb.x == doctest::Approx(2.0 - 0.8 / 0.64).epsilon(1e-14));
  CHECK(vb.y == doctest::Approx(0.0).epsilon(1e-14));

  CHECK_THROWS_AS(velocity_expansion(0.0, 0.0, sb), std::domain_error);
}

TEST_CASE("psi_expansion examples and gradient identity") {
  auto s0 = manual_state(0.4, 1.3, 0.0, 0.0);
  CHECK(psi_expansion(5.0, 2.0, s0) == doctest::Approx(1.3 * 0.4 * 2.0).epsilon(1e-14));

  auto sv = manual_state(0.0, 1.0, 0.0, 2.0 * kPi);
  CHECK(psi_expansion(std::exp(1.0), 0.0, sv) == doctest::Approx(-1.0).epsilon(1e-13));

  // grad psi = rho v^perp with the density expansion, far away
  auto s = manual_state(1.0, 0.9, 0.6, 1.7);
  double x = 700.0, y = 720.0, d = 1e-2;
  double px = (psi_expansion(x + d, y, s) - psi_expansion(x - d, y, s)) / (2.0 * d);
  double py = (psi_expansion(x, y + d, s) - psi_expansion(x, y - d, s)) / (2.0 * d);
  auto v = velocity_expansion(x, y, s);
  double rho = rho_expansion(x, y, s);
  CHECK(px == doctest::Approx(-rho * v.y).epsilon(1e-5));
  CHECK(py == doctest::Approx(rho * v.x).epsilon(1e-5));

  CHECK_THROWS_AS(psi_expansion(0.0, 0.0, s), std::domain_error);
}

TEST_CASE("M = 0 reduction matches the incompressible Laurent expansion") {
  // Im(w_inf z + (Gamma/2pi i) log z) with real w_inf equals psi_expansion at beta=1
  double v = 1.2, G = 0.8;
  auto s = manual_state(v, 1.0, 0.0, G);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-40.0, 40.0);
  for (int k = 0; k < 300; ++k) {
    double x = u(rng), y = u(rng);
    if (x * x + y * y < 4.0) continue;
    Complex z{x, y};
    double psi = (v * z + G / (2.0 * kPi * kImag) * cut_log(z)).imag();
    CHECK(psi == doctest::Approx(psi_expansion(x, y, s)).epsilon(1e-10));
  }
}

TEST_CASE("fit_circulation: exactness, equivariance, errors") {
  auto base = manual_state(1.0, 0.95, 0.25, 0.0);
  auto truth = manual_state(1.0, 0.95, 0.25, 3.7, 0.42);

  std::vector<PsiSample> samples;
  for (int k = 0; k < 64; ++k) {
    double t = 2.0 * kPi * k / 64.0;
    for (double r : {40.0, 55.0}) {
      double x = r * std::cos(t), y = r * std::sin(t);
      samples.push_back({x, y, psi_expansion(x, y, truth)});
    }
  }
  auto rep = fit_circulation(samples, base);
  CHECK(rep.gamma == doctest::Approx(3.7).epsilon(1e-9));
  CHECK(rep.psi_const == doctest::Approx(0.42).epsilon(1e-9));
  CHECK(rep.residual_rms < 1e-12);

  // affine equivariance: shifting psi only moves psi_const
  auto shifted = samples;
  for (auto& s : shifted) s.psi += 5.5;
  auto rep2 = fit_circulation(shifted, base);
  CHECK(rep2.gamma == doctest::Approx(rep.gamma).epsilon(1e-12));
  CHECK(rep2.psi_const == doctest::Approx(rep.psi_const + 5.5).epsilon(1e-12));

  // single circle at M=0: the log column is constant -> ill posed
  auto base0 = manual_state(1.0, 1.0, 0.0, 0.0);
  std::vector<PsiSample> ring;
  for (int k = 0; k < 32; ++k) {
    double t = 2.0 * kPi * k / 32.0;
    ring.push_back({50.0 * std::cos(t), 50.0 * std::sin(t), 1.0});
  }
  CHECK_THROWS_AS(fit_circulation(ring, base0), IllPosedFit);

  std::vector<PsiSample> few(5, {1.0, 1.0, 0.0});
  CHECK_THROWS_AS(fit_circulation(few, base0), std::invalid_argument);
}

TEST_CASE("extract_circulation recovers the analytic lens circulation") {
  // incompressible lens flow at 20 degrees with the trailing Kutta circulation
  double beta = 20.0 * kPi / 180.0;
  Complex w = std::polar(1.0, beta);
  double G = kutta_gamma(Corner::trailing, w);
  KTProfile p{1.5, w, G};

  // flow frame: body rotated by +beta, stream east with speed nu |w|
  auto psi_at = [&](double x, double y) {
    Complex z_flow{x, y};
    Complex z_lens = z_flow * std::polar(1.0, -beta);
    return z_potential(z_lens, p).imag();
  };
  auto base = manual_state(p.physical_speed(), 1.0, 0.0, 0.0);
  auto rep = extract_circulation(psi_at, 50.0, 64, base);
  CHECK(rep.gamma == doctest::Approx(G).epsilon(0.01));
  CHECK(rep.gamma_drift < 0.01 * std::abs(G));
}

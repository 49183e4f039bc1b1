#include "cornerflow/conformal.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kInsideTol = 1e-10;   // slack below |zeta| = 1 before "inside"
constexpr double kCornerTol = 1e-12;   // |z -+- 1| identifying a corner query
}  // namespace

KTProfile KTProfile::from_circle_freestream(double nu, Complex w_inf, double gamma) {
  if (!(nu >= 1.0 && nu <= 2.0)) throw ConfigError("KTProfile: nu must lie in [1, 2]");
  return {nu, w_inf, gamma};
}

KTProfile KTProfile::from_physical_freestream(double nu, Complex v_phys, double gamma) {
  if (!(nu >= 1.0 && nu <= 2.0)) throw ConfigError("KTProfile: nu must lie in [1, 2]");
  return {nu, v_phys / nu, gamma};
}

ExtComplex moebius_h(Complex zeta) {
  if (zeta == Complex(1.0, 0.0)) return {{0.0, 0.0}, true};
  return {(zeta + 1.0) / (zeta - 1.0), false};
}

Complex kt_forward(Complex zeta, double nu) {
  if (zeta == Complex(1.0, 0.0)) return {1.0, 0.0};
  if (zeta == Complex(-1.0, 0.0)) return {-1.0, 0.0};
  if (std::abs(zeta) < 1.0 - kInsideTol)
    throw std::domain_error("kt_forward: zeta strictly inside the unit circle");
  if (nu == 1.0) return zeta;
  Complex h = (zeta + 1.0) / (zeta - 1.0);
  Complex g = cut_pow(h, nu);
  return (g + 1.0) / (g - 1.0);
}

Complex kt_inverse(Complex z, double nu) {
  if (z == Complex(1.0, 0.0)) return {1.0, 0.0};
  if (z == Complex(-1.0, 0.0)) return {-1.0, 0.0};
  if (nu == 1.0) {
    if (std::abs(z) < 1.0 - kInsideTol) throw std::domain_error("kt_inverse: z inside the body");
    return z;
  }
  Complex wp = cut_pow(z + 1.0, 1.0 / nu);
  Complex wm = cut_pow(z - 1.0, 1.0 / nu);
  Complex zeta = (wp + wm) / (wp - wm);
  if (std::abs(zeta) < 1.0 - kInsideTol)
    throw std::domain_error("kt_inverse: z inside the body");
  return zeta;
}

Complex kt_forward_deriv(Complex zeta, double nu) {
  if (nu == 1.0) return {1.0, 0.0};
  if (std::abs(zeta - 1.0) < kCornerTol || std::abs(zeta + 1.0) < kCornerTol)
    return {0.0, 0.0};  // conformality breaks at the corners
  Complex h = (zeta + 1.0) / (zeta - 1.0);
  Complex g = cut_pow(h, nu);
  Complex hp = cut_pow(h, nu - 1.0);
  Complex d = (zeta - 1.0) * (g - 1.0);
  return 4.0 * nu * hp / (d * d);
}

Complex circle_potential(Complex zeta, const KTProfile& p) {
  if (zeta == Complex(0.0, 0.0)) throw std::domain_error("circle_potential: pole at zeta = 0");
  return p.w_inf * zeta + std::conj(p.w_inf) / zeta + p.gamma / (2.0 * kPi * kImag) * cut_log(zeta);
}

Complex circle_potential_deriv(Complex zeta, const KTProfile& p) {
  if (zeta == Complex(0.0, 0.0)) throw std::domain_error("circle_potential_deriv: pole at zeta = 0");
  return p.w_inf - std::conj(p.w_inf) / (zeta * zeta) + p.gamma / (2.0 * kPi * kImag * zeta);
}

Complex circle_potential_deriv2(Complex zeta, const KTProfile& p) {
  return 2.0 * std::conj(p.w_inf) / (zeta * zeta * zeta) - p.gamma / (2.0 * kPi * kImag * zeta * zeta);
}

double kutta_gamma(Corner corner, Complex w_inf) {
  double g = 4.0 * kPi * w_inf.imag();
  return corner == Corner::trailing ? g : -g;
}

Complex z_potential(Complex z, const KTProfile& p) {
  return circle_potential(kt_inverse(z, p.nu), p);
}

Complex z_velocity(Complex z, const KTProfile& p) {
  bool at_trailing = std::abs(z - 1.0) < kCornerTol;
  bool at_leading = std::abs(z + 1.0) < kCornerTol;
  if ((at_trailing || at_leading) && p.nu > 1.0) {
    Complex zc = at_trailing ? Complex(1.0, 0.0) : Complex(-1.0, 0.0);
    Complex wd = circle_potential_deriv(zc, p);
    double scale = std::abs(p.w_inf) + std::abs(p.gamma) / (2.0 * kPi) + 1e-300;
    if (std::abs(wd) > 1e-11 * scale)
      throw SingularVelocity("z_velocity: unbounded at corner (Kutta condition not met)",
                             1.0 / p.nu - 1.0);
    if (p.nu == 2.0) {
      // w -> W~''(+-1) 2^{nu-1}/nu (zeta -+- 1)^{2-nu}; finite only for nu = 2
      Complex w2 = circle_potential_deriv2(zc, p);
      return at_trailing ? w2 : -w2;
    }
    return {0.0, 0.0};  // nu < 2: velocity vanishes at a Kutta corner
  }
  Complex zeta = kt_inverse(z, p.nu);
  return circle_potential_deriv(zeta, p) / kt_forward_deriv(zeta, p.nu);
}

ComplexFlowSample sample_flow(Complex z, const KTProfile& p) {
  Complex zeta = kt_inverse(z, p.nu);
  Complex W = circle_potential(zeta, p);
  return {z, z_velocity(z, p), W.imag(), W.real()};
}

bool inside_body(Complex z, double nu) {
  if (nu == 1.0) return std::abs(z) < 1.0 - kInsideTol;
  Complex wp = cut_pow(z + 1.0, 1.0 / nu);
  Complex wm = cut_pow(z - 1.0, 1.0 / nu);
  if (wp == wm) return false;  // z at infinity direction; not inside
  return std::abs((wp + wm) / (wp - wm)) < 1.0 - kInsideTol;
}

std::vector<Complex> trace_streamline(Complex seed, const KTProfile& p, double step, double max_len) {
  if (inside_body(seed, p.nu)) throw std::domain_error("trace_streamline: seed inside the body");
  if (!(step > 0.0) || !(max_len > 0.0)) throw ConfigError("trace_streamline: step and max_len must be positive");

  const double bound = std::max(2.0 * std::abs(seed), 8.0);
  std::vector<Complex> line{seed};
  Complex z = seed;

  // velocity direction; zero signals stop (stagnation, body, singular corner)
  auto dir = [&](Complex at) -> Complex {
    try {
      Complex w = z_velocity(at, p);
      double a = std::abs(w);
      if (a < 1e-12) return {0.0, 0.0};
      return std::conj(w) / a;
    } catch (const std::domain_error&) {
      return {0.0, 0.0};
    } catch (const SingularVelocity&) {
      return {0.0, 0.0};
    }
  };

  double traveled = 0.0;
  while (traveled < max_len) {
    Complex k1 = dir(z);
    if (k1 == Complex(0.0, 0.0)) break;
    Complex k2 = dir(z + 0.5 * step * k1);
    if (k2 == Complex(0.0, 0.0)) break;
    Complex k3 = dir(z + 0.5 * step * k2);
    if (k3 == Complex(0.0, 0.0)) break;
    Complex k4 = dir(z + step * k3);
    if (k4 == Complex(0.0, 0.0)) break;
    z += step / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    traveled += step;
    if (inside_body(z, p.nu)) break;
    line.push_back(z);
    if (std::abs(z.real()) > bound || std::abs(z.imag()) > bound) break;  // domain exit
  }
  return line;
}

}  // namespace cornerflow

#include "cornerflow/subsolution.hpp"

#include <cmath>
#include <numbers>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {
constexpr double kPi = std::numbers::pi;

struct PolarDerivs {
  double w_r, w_rr, w_t, w_tt, w_rt;
};

PolarDerivs polar_derivs(const Subsolution& sub, double r, double theta) {
  double s = 1.0 - sub.eps;
  double a = sub.amplitude;
  double c = std::cos(theta - sub.theta_mid), sn = std::sin(theta - sub.theta_mid);
  double u = 1.0 + a * c, up = -a * sn, upp = -a * c;
  double rs1 = std::pow(r, s - 1.0), rs = rs1 * r, rs2 = rs1 / r;
  return {s * rs1 * u, s * (s - 1.0) * rs2 * u, rs * up, rs * upp, s * rs1 * up};
}

void cartesian_hessian(const PolarDerivs& d, double r, double theta, double& wxx, double& wxy,
                       double& wyy) {
  double c = std::cos(theta), s = std::sin(theta);
  double ir = 1.0 / r, ir2 = ir * ir;
  wxx = c * c * d.w_rr - 2.0 * c * s * ir * d.w_rt + s * s * ir * d.w_r + 2.0 * c * s * ir2 * d.w_t +
        s * s * ir2 * d.w_tt;
  wyy = s * s * d.w_rr + 2.0 * c * s * ir * d.w_rt + c * c * ir * d.w_r - 2.0 * c * s * ir2 * d.w_t +
        c * c * ir2 * d.w_tt;
  wxy = c * s * d.w_rr + (c * c - s * s) * ir * d.w_rt - c * s * ir * d.w_r -
        (c * c - s * s) * ir2 * d.w_t - c * s * ir2 * d.w_tt;
}

double min_eigenvalue(const Mat2& A) {
  double tr = A.xx + A.yy;
  double disc = std::sqrt((A.xx - A.yy) * (A.xx - A.yy) + 4.0 * A.xy * A.xy);
  return 0.5 * (tr - disc);
}
}  // namespace

double zero_distance(double a) {
  if (!(a >= 1.0)) throw ConfigError("zero_distance: amplitude must be >= 1");
  return std::acos(-1.0 / a);
}

double subsolution_value(const Subsolution& s, double r, double theta) {
  return std::pow(r, 1.0 - s.eps) * (1.0 + s.amplitude * std::cos(theta - s.theta_mid));
}

double subsolution_Lw(const Subsolution& s, const Mat2& A, double r, double theta) {
  auto d = polar_derivs(s, r, theta);
  double wxx, wxy, wyy;
  cartesian_hessian(d, r, theta, wxx, wxy, wyy);
  return -(A.xx * wxx + 2.0 * A.xy * wxy + A.yy * wyy);
}

double subsolution_Lw_scale(const Subsolution& s, const Mat2& A, double r) {
  double normA = std::abs(A.xx) + 2.0 * std::abs(A.xy) + std::abs(A.yy);
  return normA * std::pow(r, -1.0 - s.eps) * (1.0 + s.amplitude) * 4.0;
}

namespace {
/// worst L w / scale over a log-r x theta sample grid
double worst_scaled_lw(const Subsolution& sub, const CoeffSampler& coeff, int n, double* at_r,
                       double* at_theta) {
  double worst = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < n; ++i) {
    double r = sub.r_max * std::pow(10.0, -6.0 * (n - 1 - i) / std::max(1, n - 1));
    for (int j = 0; j < n; ++j) {
      double theta = sub.theta_lo + (sub.theta_hi - sub.theta_lo) * j / (n - 1.0);
      Mat2 A = coeff(r, theta);
      double lw = subsolution_Lw(sub, A, r, theta) / subsolution_Lw_scale(sub, A, r);
      if (lw > worst) {
        worst = lw;
        if (at_r) *at_r = r;
        if (at_theta) *at_theta = theta;
      }
    }
  }
  return worst;
}
}  // namespace

Subsolution build_subsolution(double theta_lo, double theta_hi, const CoeffSampler& coeff,
                              double r_max, int grid_n) {
  double span = theta_hi - theta_lo;
  if (!(span > kPi))
    throw NotProtruding("build_subsolution: sector angle must exceed pi");
  if (!(span <= 2.0 * kPi + 1e-14))
    throw ConfigError("build_subsolution: sector angle must be at most 2 pi");
  if (!(r_max > 0.0)) throw ConfigError("build_subsolution: r_max must be positive");

  // the coefficients must be uniformly elliptic on the sector
  for (int i = 0; i < 16; ++i) {
    double r = r_max * std::pow(10.0, -6.0 * i / 15.0);
    for (int j = 0; j <= 16; ++j) {
      Mat2 A = coeff(r, theta_lo + span * j / 16.0);
      if (!(min_eigenvalue(A) > 0.0))
        throw EllipticityViolation("build_subsolution: coefficients are not elliptic");
    }
  }

  Subsolution sub;
  sub.theta_lo = theta_lo;
  sub.theta_hi = theta_hi;
  sub.theta_mid = 0.5 * (theta_lo + theta_hi);
  sub.amplitude = -1.0 / std::cos(0.5 * span);  // zeros of u exactly on the radii
  sub.r_max = r_max;
  sub.eps = 0.5;
  while (true) {
    if (worst_scaled_lw(sub, coeff, grid_n, nullptr, nullptr) <= 0.0) break;
    sub.eps *= 0.5;
    if (sub.eps < 1e-6)
      throw EllipticityViolation("build_subsolution: eps underflow; coefficients too degenerate");
  }
  sub.eps *= 0.5;  // strict margin
  return sub;
}

SubsolutionCheck verify_subsolution(const Subsolution& s, const CoeffSampler& coeff,
                                    int grid_size) {
  SubsolutionCheck rep{true, 0.0, 0.0, 0.0, ""};
  rep.worst_lw = worst_scaled_lw(s, coeff, grid_size, &rep.worst_r, &rep.worst_theta);
  if (rep.worst_lw > 1e-12) {
    rep.passed = false;
    rep.failure = "L w > 0 inside the sector";
    return rep;
  }
  // w <= 0 on the radii (u vanishes there by construction)
  for (double theta : {s.theta_lo, s.theta_hi}) {
    for (int i = 1; i <= 8; ++i) {
      double r = s.r_max * i / 8.0;
      double w = subsolution_value(s, r, theta);
      if (w > 1e-12 * std::pow(r, 1.0 - s.eps) * (1.0 + s.amplitude)) {
        rep.passed = false;
        rep.worst_r = r;
        rep.worst_theta = theta;
        rep.failure = "w > 0 on a radius";
        return rep;
      }
    }
  }
  // growth along the mid ray: w = r^(1-eps) (1 + a) >= r^(1-eps)
  for (int i = 1; i <= 8; ++i) {
    double r = s.r_max * i / 8.0;
    if (subsolution_value(s, r, s.theta_mid) < std::pow(r, 1.0 - s.eps)) {
      rep.passed = false;
      rep.worst_r = r;
      rep.worst_theta = s.theta_mid;
      rep.failure = "w below r^(1-eps) on the mid ray";
      return rep;
    }
  }
  return rep;
}

}  // namespace cornerflow

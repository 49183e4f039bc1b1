#pragma once

#include <functional>
#include <string>

namespace cornerflow {

/// Symmetric 2x2 coefficient matrix of L = -A : Hessian, Cartesian components.
struct Mat2 {
  double xx, xy, yy;
};

/// Coefficients sampled over the sector in polar coordinates.
using CoeffSampler = std::function<Mat2(double r, double theta)>;

/// w(r, theta) = r^(1-eps) (1 + a cos(theta - theta_mid)) on the sector
/// (theta_lo, theta_hi), vanishing on the radii, with L w <= 0.
struct Subsolution {
  double theta_lo, theta_hi, theta_mid;
  double amplitude;  // a >= 1
  double eps;        // in (0, 1)
  double r_max;
};

/// Angular distance from theta_mid to the zeros of 1 + a cos: arccos(-1/a).
double zero_distance(double a);

double subsolution_value(const Subsolution& s, double r, double theta);

/// L w = -(A : Hessian w) from the exact polar Hessian of r^(1-eps) u(theta).
double subsolution_Lw(const Subsolution& s, const Mat2& A, double r, double theta);

/// Magnitude reference for the <= 0 tests of L w at (r, theta).
double subsolution_Lw_scale(const Subsolution& s, const Mat2& A, double r);

/// Picks a with zeros exactly on the radii and halves eps from 0.5 until
/// L w <= 0 at every sample of a grid_n x grid_n (log-r x theta) sector grid,
/// then halves once more for margin.
/// Throws NotProtruding when theta_hi - theta_lo <= pi and
/// EllipticityViolation when eps underflows 1e-6.
Subsolution build_subsolution(double theta_lo, double theta_hi, const CoeffSampler& coeff,
                              double r_max, int grid_n = 64);

struct SubsolutionCheck {
  bool passed;
  double worst_lw;      // largest L w relative to the local scale
  double worst_r, worst_theta;
  std::string failure;  // empty when passed
};

/// Independent re-verification of the three clauses: L w <= tol * scale on a
/// grid_size^2 sector grid, w <= 0 on the radii, w(r, theta_mid) >= r^(1-eps).
SubsolutionCheck verify_subsolution(const Subsolution& s, const CoeffSampler& coeff,
                                    int grid_size);

}  // namespace cornerflow

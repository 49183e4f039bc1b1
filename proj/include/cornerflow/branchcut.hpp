#pragma once

#include <cmath>
#include <complex>

namespace cornerflow {

using Complex = std::complex<double>;

inline constexpr Complex kImag{0.0, 1.0};

/// Argument with the branch cut just below the negative real axis:
/// arg in (-pi, pi], points on the negative real axis get +pi.
inline double cut_arg(Complex z) {
  double y = z.imag();
  if (y == 0.0) y = +0.0;  // a signed -0.0 would fall on the wrong side of the cut
  return std::atan2(y, z.real());
}

/// log with the cut of cut_arg.
inline Complex cut_log(Complex z) {
  return {std::log(std::abs(z)), cut_arg(z)};
}

/// Fractional power z^p with the cut of cut_arg. 0^p = 0 for p > 0.
inline Complex cut_pow(Complex z, double p) {
  if (z == Complex(0.0, 0.0)) return {0.0, 0.0};
  return std::exp(p * cut_log(z));
}

inline double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

inline double cross(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

/// Rotation by -90 degrees; maps a CCW boundary tangent to the outward normal.
inline Complex rot_cw(Complex v) { return {v.imag(), -v.real()}; }

/// Rotation by +90 degrees.
inline Complex rot_ccw(Complex v) { return {-v.imag(), v.real()}; }

/// Compensated accumulation; keeps reductions order-stable at machine precision.
struct KahanSum {
  double sum = 0.0;
  double carry = 0.0;
  void add(double x) {
    double y = x - carry;
    double t = sum + y;
    carry = (t - sum) - y;
    sum = t;
  }
  double value() const { return sum; }
};

}  // namespace cornerflow

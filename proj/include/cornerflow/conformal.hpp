#pragma once

#include <vector>

#include "cornerflow/branchcut.hpp"

namespace cornerflow {

enum class Corner { trailing, leading };  // images z = +1 and z = -1

/// Karman-Trefftz symmetric lens in the zeta (circle) plane.
///
/// The body is the image of the unit circle under f = h(h(zeta)^nu) with
/// h(zeta) = (zeta+1)/(zeta-1); corners sit at z = +-1 with fluid angle nu*pi.
/// w_inf is the circle-plane free-stream parameter |w|e^{i beta}; the physical
/// free-stream complex velocity is nu * w_inf since f'(inf) = 1/nu.
///
/// Note w = v_x - i v_y, so arg(w_inf) = -(geometric flow angle).
struct KTProfile {
  double nu;       // fluid corner angle / pi, in (1, 2]; 1 = circle is allowed for controls
  Complex w_inf;   // circle-plane free stream
  double gamma;    // circulation

  static KTProfile from_circle_freestream(double nu, Complex w_inf, double gamma);
  /// Chooses w_inf = v_phys / nu so the physical free stream is v_phys.
  static KTProfile from_physical_freestream(double nu, Complex v_phys, double gamma);

  double attack_angle() const { return cut_arg(w_inf); }
  double physical_speed() const { return nu * std::abs(w_inf); }
};

struct ComplexFlowSample {
  Complex z;
  Complex w;    // complex velocity v_x - i v_y
  double psi;   // Im W (single-valued)
  double phi;   // Re W (principal branch; jumps across the upstream cut)
};

/// Value of the Moebius involution, with the pole at zeta=1 represented
/// explicitly as the point at infinity.
struct ExtComplex {
  Complex value;
  bool at_infinity;
};

/// h(zeta) = (zeta+1)/(zeta-1); swaps +-1 with 0, infinity; its own inverse.
ExtComplex moebius_h(Complex zeta);

/// z = f(zeta) = h(h(zeta)^nu); exterior of the unit circle to exterior of
/// the lens, f(+-1) = +-1 exactly. Throws std::domain_error strictly inside.
Complex kt_forward(Complex zeta, double nu);

/// f^{-1}(z) = ((z+1)^{1/nu} + (z-1)^{1/nu}) / ((z+1)^{1/nu} - (z-1)^{1/nu}).
/// Returns |zeta| >= 1; corners map to +-1 exactly. Throws std::domain_error
/// for z inside the body.
Complex kt_inverse(Complex z, double nu);

/// f'(zeta); zero at the corners.
Complex kt_forward_deriv(Complex zeta, double nu);

/// W~(zeta) = w_inf zeta + conj(w_inf)/zeta + Gamma/(2 pi i) log zeta.
/// Satisfies Im W~ = 0 on the unit circle. Throws std::domain_error at 0.
Complex circle_potential(Complex zeta, const KTProfile& p);
Complex circle_potential_deriv(Complex zeta, const KTProfile& p);
Complex circle_potential_deriv2(Complex zeta, const KTProfile& p);

/// Circulation that makes the velocity bounded at the given corner:
/// +4 pi Im(w_inf) at the trailing corner, -4 pi Im(w_inf) at the leading one.
double kutta_gamma(Corner corner, Complex w_inf);

/// W(z) = W~(f^{-1}(z)).
Complex z_potential(Complex z, const KTProfile& p);

/// dW/dz = W~'(zeta) / f'(zeta) at zeta = f^{-1}(z).
/// At a corner: returns the (finite) limit when the Kutta condition holds
/// there, otherwise throws SingularVelocity with exponent 1/nu - 1.
Complex z_velocity(Complex z, const KTProfile& p);

ComplexFlowSample sample_flow(Complex z, const KTProfile& p);

/// True if z lies strictly inside the body (|f^{-1}(z)| < 1).
bool inside_body(Complex z, double nu);

/// Arc-length RK4 integration of the velocity direction field.
/// Terminates at max_len, on leaving the neighbourhood of the body,
/// or at a stagnation point (|w| < 1e-12).
std::vector<Complex> trace_streamline(Complex seed, const KTProfile& p, double step, double max_len);

}  // namespace cornerflow

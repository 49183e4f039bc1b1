#pragma once

#include <functional>
#include <span>
#include <vector>

#include "cornerflow/branchcut.hpp"
#include "cornerflow/gas.hpp"

namespace cornerflow {

/// Flow state at infinity in the flow-aligned frame (free stream along +x).
struct FarFieldState {
  double v_inf;      // horizontal free-stream speed, >= 0
  double rho_inf;    // free-stream density
  double mach_inf;   // in [0, 1)
  double pg_factor;  // Prandtl-Glauert sqrt(1 - M^2)
  double gamma;      // circulation
  double psi_const;  // additive constant of the stream-function expansion
};

/// Builds the state from a gas model and the free-stream speed.
FarFieldState make_farfield(const GasModel& gas, double v_inf, double circulation,
                            double psi_const = 0.0);

/// Gas whose Bernoulli constant makes speed v_inf correspond to Mach mach_inf.
GasModel gas_for_mach(double gamma, double mach_inf, double v_inf);

struct Vec2 {
  double x, y;
};

/// Leading terms of the velocity expansion at infinity:
///   (v_inf, 0) + (Gamma/2pi) beta (-y, x) / (x^2 + beta^2 y^2).
Vec2 velocity_expansion(double x, double y, const FarFieldState& s);

/// Leading terms of the stream-function expansion:
///   rho_inf (v_inf y - (Gamma/2pi) beta log sqrt(x^2 + beta^2 y^2)) + psi_const.
double psi_expansion(double x, double y, const FarFieldState& s);

struct PsiSample {
  double x, y, psi;
};

struct FitReport {
  double gamma;
  double psi_const;
  double residual_rms;
  double ring_radius = 0.0;  // informational
  double gamma_drift = 0.0;  // |gamma - gamma(second ring set)| when available
};

/// Linear least squares for (Gamma, psi_const) on the expansion basis
/// {log sqrt(x^2+beta^2 y^2), 1} after subtracting rho_inf v_inf y.
/// Needs >= 8 samples; throws IllPosedFit when the log column is constant
/// (all samples on one level set of x^2 + beta^2 y^2).
FitReport fit_circulation(std::span<const PsiSample> samples, const FarFieldState& base);

/// Samples psi on two circles (r and 1.3 r, n angles each) and fits; two radii
/// keep the fit well posed at M = 0 and the drift between a second pair at
/// 1.5x radius is reported as an error bar.
FitReport extract_circulation(const std::function<double(double, double)>& psi_at, double radius,
                              int n_angles, const FarFieldState& base);

}  // namespace cornerflow

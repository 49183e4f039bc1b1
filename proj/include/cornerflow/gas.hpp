#pragma once

#include <limits>

namespace cornerflow {

/// Polytropic gas model p = rho^gamma with a fixed Bernoulli constant B:
///   speed form      B = q^2/2 + pi(rho),           pi = gamma/(gamma-1) rho^(gamma-1)
///   momentum form   B = m / rho^2 + pi(rho),       m  = |rho v|^2 / 2
/// The momentum form is inverted on the subsonic branch (larger density root),
/// giving the strictly increasing 1/rho = h_div(m) on [0, sonic_momentum()).
///
/// The incompressible mode is the h == 1/rho_ref limit, selected by a flag
/// rather than a separate type.
class GasModel {
 public:
  /// Compressible gas. Requires gamma > 1 and bernoulli > 0.
  static GasModel polytropic(double gamma, double bernoulli);

  /// Compressible gas normalized so that the stagnation density is 1,
  /// i.e. B = gamma/(gamma-1).
  static GasModel polytropic_stagnation_unit(double gamma);

  /// Incompressible limit with constant density rho_ref.
  static GasModel incompressible(double rho_ref = 1.0);

  double gamma() const { return gamma_; }
  double bernoulli() const { return bernoulli_; }
  bool is_incompressible() const { return incompressible_; }
  double rho_ref() const { return rho_ref_; }

  /// p(rho) = rho^gamma. rho >= 0.
  double pressure(double rho) const;

  /// c^2 = p_rho(rho) = gamma rho^(gamma-1). rho > 0.
  double sound_speed_sq(double rho) const;

  /// pi(rho) = gamma/(gamma-1) rho^(gamma-1); antiderivative of p_rho/rho
  /// with the additive constant fixed so pi -> 0 as rho -> 0. rho > 0.
  double enthalpy(double rho) const;

  /// Inverts the speed-form Bernoulli relation: rho with q^2/2 + pi(rho) = B.
  /// Defined exactly on [0, limit_speed()); throws VacuumExceeded beyond.
  double density_from_speed(double q) const;

  /// sqrt(2 B); the speed at which the density reaches zero.
  /// +infinity in incompressible mode.
  double limit_speed() const;

  /// rho at q = 0; the maximum of density_from_speed.
  double stagnation_density() const;

  /// m value at which the momentum-form inversion turns sonic:
  /// (rho* c*)^2 / 2 with c*^2 = 2B(gamma-1)/(gamma+1), rho* = (c*^2/gamma)^(1/(gamma-1)).
  /// Throws NotApplicable in incompressible mode.
  double sonic_momentum() const;

  double sonic_speed_sq() const;
  double sonic_density() const;

  /// 1/rho on the subsonic branch of the momentum-form Bernoulli relation.
  /// Strictly increasing on [0, sonic_momentum()); throws SonicExceeded beyond.
  double h_div(double m) const;

  /// d(h_div)/dm, positive on the open domain. Zero in incompressible mode.
  double h_div_prime(double m) const;

  /// Mach number of the state reached at speed q. Zero in incompressible mode.
  double mach_from_speed(double q) const;

 private:
  GasModel() = default;

  double gamma_ = 0.0;
  double bernoulli_ = 0.0;
  bool incompressible_ = false;
  double rho_ref_ = 1.0;

  // cached derived state (compressible mode)
  double rho_stag_ = 0.0;
  double v_limit_ = std::numeric_limits<double>::infinity();
  double c_star_sq_ = 0.0;
  double rho_star_ = 0.0;
  double m_sonic_ = 0.0;
};

}  // namespace cornerflow

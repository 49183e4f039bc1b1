#include "cornerflow/gas.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "cornerflow/errors.hpp"

namespace cornerflow {

GasModel GasModel::polytropic(double gamma, double bernoulli) {
  if (!(gamma > 1.0)) throw ConfigError("GasModel: gamma must exceed 1, got " + std::to_string(gamma));
  if (!(bernoulli > 0.0)) throw ConfigError("GasModel: bernoulli must be positive");
  GasModel g;
  g.gamma_ = gamma;
  g.bernoulli_ = bernoulli;
  g.rho_stag_ = std::pow((gamma - 1.0) / gamma * bernoulli, 1.0 / (gamma - 1.0));
  g.v_limit_ = std::sqrt(2.0 * bernoulli);
  g.c_star_sq_ = 2.0 * bernoulli * (gamma - 1.0) / (gamma + 1.0);
  g.rho_star_ = std::pow(g.c_star_sq_ / gamma, 1.0 / (gamma - 1.0));
  g.m_sonic_ = 0.5 * g.rho_star_ * g.rho_star_ * g.c_star_sq_;
  return g;
}

GasModel GasModel::polytropic_stagnation_unit(double gamma) {
  return polytropic(gamma, gamma / (gamma - 1.0));
}

GasModel GasModel::incompressible(double rho_ref) {
  if (!(rho_ref > 0.0)) throw ConfigError("GasModel: rho_ref must be positive");
  GasModel g;
  g.incompressible_ = true;
  g.rho_ref_ = rho_ref;
  g.bernoulli_ = 1.0;  // unused; kept positive for serialization
  return g;
}

double GasModel::pressure(double rho) const {
  if (incompressible_) throw NotApplicable("pressure: incompressible mode");
  if (rho < 0.0) throw std::domain_error("pressure: negative density");
  return std::pow(rho, gamma_);
}

double GasModel::sound_speed_sq(double rho) const {
  if (incompressible_) throw NotApplicable("sound_speed_sq: incompressible mode");
  if (!(rho > 0.0)) throw std::domain_error("sound_speed_sq: density must be positive");
  return gamma_ * std::pow(rho, gamma_ - 1.0);
}

double GasModel::enthalpy(double rho) const {
  if (incompressible_) throw NotApplicable("enthalpy: incompressible mode");
  if (!(rho > 0.0)) throw std::domain_error("enthalpy: density must be positive");
  return gamma_ / (gamma_ - 1.0) * std::pow(rho, gamma_ - 1.0);
}

double GasModel::density_from_speed(double q) const {
  if (incompressible_) return rho_ref_;
  if (q < 0.0) throw std::domain_error("density_from_speed: negative speed");
  if (q >= v_limit_) throw VacuumExceeded("density_from_speed: speed at or past the limit speed");
  return std::pow((gamma_ - 1.0) / gamma_ * (bernoulli_ - 0.5 * q * q), 1.0 / (gamma_ - 1.0));
}

double GasModel::limit_speed() const { return incompressible_ ? std::numeric_limits<double>::infinity() : v_limit_; }

double GasModel::stagnation_density() const { return incompressible_ ? rho_ref_ : rho_stag_; }

double GasModel::sonic_momentum() const {
  if (incompressible_) throw NotApplicable("sonic_momentum: incompressible mode");
  return m_sonic_;
}

double GasModel::sonic_speed_sq() const {
  if (incompressible_) throw NotApplicable("sonic_speed_sq: incompressible mode");
  return c_star_sq_;
}

double GasModel::sonic_density() const {
  if (incompressible_) throw NotApplicable("sonic_density: incompressible mode");
  return rho_star_;
}

double GasModel::h_div(double m) const {
  if (incompressible_) return 1.0 / rho_ref_;
  if (m < 0.0) throw std::domain_error("h_div: negative momentum argument");
  if (m >= m_sonic_) throw SonicExceeded("h_div: momentum at or past the sonic value");
  if (m == 0.0) return 1.0 / rho_stag_;

  // Solve F(rho) = m/rho^2 + pi(rho) - B = 0 on the subsonic branch
  // rho in (rho_star, rho_stag]. F(rho_star) < 0 <= F(rho_stag), F' > 0 there.
  const double coef = gamma_ / (gamma_ - 1.0);
  auto F = [&](double rho) { return m / (rho * rho) + coef * std::pow(rho, gamma_ - 1.0) - bernoulli_; };
  auto Fp = [&](double rho) { return -2.0 * m / (rho * rho * rho) + gamma_ * std::pow(rho, gamma_ - 2.0); };

  double lo = rho_star_, hi = rho_stag_;
  double rho = rho_stag_;  // Newton from the stagnation end
  for (int it = 0; it < 200; ++it) {
    double f = F(rho);
    if (f > 0.0) hi = rho; else lo = rho;
    double step = f / Fp(rho);
    double next = rho - step;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);  // bisection fallback
    if (std::abs(next - rho) <= 4e-16 * rho) {
      return 1.0 / next;
    }
    rho = next;
  }
  throw std::runtime_error("h_div: Newton/bisection did not converge");
}

double GasModel::h_div_prime(double m) const {
  if (incompressible_) return 0.0;
  // implicit differentiation of m/rho^2 + pi(rho) = B:
  //   d(1/rho)/dm = 1 / (rho^3 (c^2 - q^2)),  q^2 = 2 m / rho^2
  double rho = 1.0 / h_div(m);
  double c2 = gamma_ * std::pow(rho, gamma_ - 1.0);
  double q2 = 2.0 * m / (rho * rho);
  return 1.0 / (rho * rho * rho * (c2 - q2));
}

double GasModel::mach_from_speed(double q) const {
  if (incompressible_) return 0.0;
  double rho = density_from_speed(q);
  return q / std::sqrt(sound_speed_sq(rho));
}

}  // namespace cornerflow

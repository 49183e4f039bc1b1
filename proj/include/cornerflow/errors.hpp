#pragma once

#include <stdexcept>
#include <string>

namespace cornerflow {

/// Bernoulli inversion requested at or beyond the vacuum limit speed.
struct VacuumExceeded : std::domain_error {
  using std::domain_error::domain_error;
};

/// Momentum argument at or beyond the sonic value; the subsonic branch of
/// the Bernoulli relation is not defined there.
struct SonicExceeded : std::domain_error {
  using std::domain_error::domain_error;
};

/// Operation has no meaning for the model in its current mode
/// (e.g. sonic quantities of an incompressible gas).
struct NotApplicable : std::logic_error {
  using std::logic_error::logic_error;
};

/// Velocity evaluation at a corner where the Kutta condition does not hold.
/// Carries the local blow-up exponent of |w| ~ r^exponent.
struct SingularVelocity : std::runtime_error {
  double exponent;
  SingularVelocity(const std::string& msg, double exp_)
      : std::runtime_error(msg), exponent(exp_) {}
};

/// Least-squares fit with a rank-deficient design matrix.
struct IllPosedFit : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Invalid run/grid/solver parameters.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A face momentum reached the sonic value during residual assembly.
struct SupersonicFace : std::runtime_error {
  int edge;
  double x, y;
  double momentum;
  SupersonicFace(const std::string& msg, int edge_, double x_, double y_, double m_)
      : std::runtime_error(msg), edge(edge_), x(x_), y(y_), momentum(m_) {}
};

/// Subsolution construction on a sector of angle <= pi.
struct NotProtruding : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Subsolution exponent search underflowed; coefficients too degenerate.
struct EllipticityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace cornerflow

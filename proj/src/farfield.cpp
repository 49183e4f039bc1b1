#include "cornerflow/farfield.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

FarFieldState make_farfield(const GasModel& gas, double v_inf, double circulation,
                            double psi_const) {
  if (!(v_inf >= 0.0)) throw ConfigError("make_farfield: v_inf must be >= 0");
  FarFieldState s;
  s.v_inf = v_inf;
  s.rho_inf = gas.density_from_speed(v_inf);
  s.mach_inf = gas.mach_from_speed(v_inf);
  if (s.mach_inf >= 1.0) throw ConfigError("make_farfield: free stream is not subsonic");
  s.pg_factor = std::sqrt(1.0 - s.mach_inf * s.mach_inf);
  s.gamma = circulation;
  s.psi_const = psi_const;
  return s;
}

GasModel gas_for_mach(double gamma, double mach_inf, double v_inf) {
  if (!(mach_inf > 0.0 && mach_inf < 1.0))
    throw ConfigError("gas_for_mach: mach_inf must lie in (0, 1)");
  if (!(v_inf > 0.0)) throw ConfigError("gas_for_mach: v_inf must be positive");
  // c_inf^2 = v^2 / M^2 and B = v^2/2 + c_inf^2/(gamma-1)
  double c2 = v_inf * v_inf / (mach_inf * mach_inf);
  return GasModel::polytropic(gamma, 0.5 * v_inf * v_inf + c2 / (gamma - 1.0));
}

Vec2 velocity_expansion(double x, double y, const FarFieldState& s) {
  if (x == 0.0 && y == 0.0) throw std::domain_error("velocity_expansion: singular at the origin");
  double b = s.pg_factor;
  double den = x * x + b * b * y * y;
  double c = s.gamma / (2.0 * kPi) * b / den;
  return {s.v_inf - c * y, c * x};
}

double psi_expansion(double x, double y, const FarFieldState& s) {
  if (x == 0.0 && y == 0.0) throw std::domain_error("psi_expansion: singular at the origin");
  double b = s.pg_factor;
  double logr = 0.5 * std::log(x * x + b * b * y * y);
  return s.rho_inf * (s.v_inf * y - s.gamma / (2.0 * kPi) * b * logr) + s.psi_const;
}

FitReport fit_circulation(std::span<const PsiSample> samples, const FarFieldState& base) {
  const std::size_t n = samples.size();
  if (n < 8) throw std::invalid_argument("fit_circulation: need at least 8 samples");
  double b = base.pg_factor;
  // model: psi - rho v y = t * Gamma + C with t = -(rho b / 2pi) log sqrt(x^2+b^2 y^2)
  KahanSum st, stt, sd, std_;
  for (const auto& s : samples) {
    double t = -base.rho_inf * b / (2.0 * kPi) * 0.5 * std::log(s.x * s.x + b * b * s.y * s.y);
    double d = s.psi - base.rho_inf * base.v_inf * s.y;
    st.add(t);
    stt.add(t * t);
    sd.add(d);
    std_.add(t * d);
  }
  double N = static_cast<double>(n);
  double det = N * stt.value() - st.value() * st.value();
  double var_t = det / (N * N);  // sample variance of the log column
  double scale_t = stt.value() / N + 1e-300;
  if (!(var_t > 1e-20 * scale_t))
    throw IllPosedFit("fit_circulation: samples lie on one level set of x^2 + beta^2 y^2");

  double gamma = (N * std_.value() - st.value() * sd.value()) / det;
  double cconst = (sd.value() - gamma * st.value()) / N;

  KahanSum res2;
  for (const auto& s : samples) {
    double t = -base.rho_inf * b / (2.0 * kPi) * 0.5 * std::log(s.x * s.x + b * b * s.y * s.y);
    double d = s.psi - base.rho_inf * base.v_inf * s.y;
    double r = t * gamma + cconst - d;
    res2.add(r * r);
  }
  FitReport rep;
  rep.gamma = gamma;
  rep.psi_const = cconst;
  rep.residual_rms = std::sqrt(res2.value() / N);
  return rep;
}

namespace {
std::vector<PsiSample> two_ring_samples(const std::function<double(double, double)>& psi_at,
                                        double r1, double r2, int n_angles) {
  std::vector<PsiSample> out;
  out.reserve(2 * n_angles);
  for (double r : {r1, r2}) {
    for (int k = 0; k < n_angles; ++k) {
      double t = 2.0 * kPi * (k + 0.5) / n_angles;
      double x = r * std::cos(t), y = r * std::sin(t);
      out.push_back({x, y, psi_at(x, y)});
    }
  }
  return out;
}
}  // namespace

FitReport extract_circulation(const std::function<double(double, double)>& psi_at, double radius,
                              int n_angles, const FarFieldState& base) {
  auto s1 = two_ring_samples(psi_at, radius, 1.3 * radius, n_angles);
  FitReport rep = fit_circulation(s1, base);
  rep.ring_radius = radius;
  auto s2 = two_ring_samples(psi_at, 1.5 * radius, 1.95 * radius, n_angles);
  FitReport rep2 = fit_circulation(s2, base);
  rep.gamma_drift = std::abs(rep.gamma - rep2.gamma);
  return rep;
}

}  // namespace cornerflow

#include "cornerflow/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {
constexpr double kPi = std::numbers::pi;

struct LineFit {
  double slope, intercept, r_squared;
};

LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  int n = static_cast<int>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  double intercept = (sy - slope * sx) / n;
  double ss_res = 0, ss_tot = 0, ybar = sy / n;
  for (int i = 0; i < n; ++i) {
    double e = y[i] - (slope * x[i] + intercept);
    ss_res += e * e;
    ss_tot += (y[i] - ybar) * (y[i] - ybar);
  }
  double r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return {slope, intercept, r2};
}
}  // namespace

CornerReport fit_corner_exponent_data(std::vector<double> radii, std::vector<double> speeds,
                                      Corner corner, double theoretical) {
  if (radii.size() < 6) throw std::invalid_argument("fit_corner_exponent: need >= 6 radii");
  if (radii.size() != speeds.size())
    throw std::invalid_argument("fit_corner_exponent: radii/speeds size mismatch");
  for (std::size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] < radii[i - 1]))
      throw std::invalid_argument("fit_corner_exponent: radii must decrease strictly toward 0");
  if (!(radii.front() / radii.back() >= 100.0 * (1.0 - 1e-9)))
    throw std::invalid_argument("fit_corner_exponent: radii must span at least two decades");

  std::vector<double> lx(radii.size()), ly(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!std::isfinite(speeds[i]) || !(speeds[i] > 0.0))
      throw std::domain_error("fit_corner_exponent: non-finite or non-positive speed sample");
    lx[i] = std::log(radii[i]);
    ly[i] = std::log(speeds[i]);
  }
  auto fit = fit_line(lx, ly);
  CornerReport rep;
  rep.corner = corner;
  rep.radii = std::move(radii);
  rep.speeds = std::move(speeds);
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r_squared = fit.r_squared;
  rep.theoretical = theoretical;
  rep.bounded = fit.slope >= -0.02;
  return rep;
}

CornerReport fit_corner_exponent(const std::function<double(double)>& speed_at,
                                 const std::vector<double>& radii, Corner corner,
                                 double theoretical) {
  std::vector<double> speeds(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) speeds[i] = speed_at(radii[i]);
  return fit_corner_exponent_data(radii, std::move(speeds), corner, theoretical);
}

int locate_cell(const ExteriorGrid& grid, Complex z) {
  Complex zeta = kt_inverse(z / grid.rotation, grid.profile.nu);
  double r = std::abs(zeta);
  if (r > grid.R * (1.0 + 1e-12)) throw ConfigError("locate_cell: point outside the grid annulus");
  double theta = cut_arg(zeta);
  if (theta < 0.0) theta += 2.0 * kPi;
  auto it = std::upper_bound(grid.radii.begin(), grid.radii.end(), r);
  int i = std::clamp(static_cast<int>(it - grid.radii.begin()) - 1, 0, grid.nr - 1);
  int j = static_cast<int>(std::floor(theta / (2.0 * kPi / grid.ntheta) - 0.5));
  return grid.cell_id(i, j);
}

CornerReport solver_corner_exponent(const ExteriorGrid& grid, const StreamField& field,
                                    Corner corner, double r_lo, double r_hi, int points,
                                    double theoretical) {
  const CornerProbe& probe = grid.corner[corner == Corner::trailing ? 0 : 1];
  Complex bisector = corner == Corner::trailing ? grid.rotation : -grid.rotation;

  // cell speeds sampled along the outward bisector ray, largest radius first
  std::vector<double> radii(points), speeds(points);
  for (int k = 0; k < points; ++k) {
    double r = r_hi * std::pow(r_lo / r_hi, k / (points - 1.0));
    int c = locate_cell(grid, probe.position + r * bisector);
    radii[k] = r;
    speeds[k] = std::hypot(field.vx[c], field.vy[c]);
  }
  return fit_corner_exponent_data(std::move(radii), std::move(speeds), corner, theoretical);
}

KuttaGap kutta_incompatibility(Complex w_inf) {
  double gt = kutta_gamma(Corner::trailing, w_inf);
  double gl = kutta_gamma(Corner::leading, w_inf);
  return {gt, gl, std::abs(gt - gl)};
}

double interpolate_psi(const ExteriorGrid& grid, const std::vector<double>& psi, Complex z) {
  Complex zeta = kt_inverse(z / grid.rotation, grid.profile.nu);
  double r = std::abs(zeta);
  if (r > grid.R * (1.0 + 1e-12) || r < 1.0 - 1e-12)
    throw ConfigError("interpolate_psi: point outside the grid annulus");
  double theta = cut_arg(zeta);
  if (theta < 0.0) theta += 2.0 * kPi;

  auto it = std::upper_bound(grid.radii.begin(), grid.radii.end(), r);
  int i0 = std::clamp(static_cast<int>(it - grid.radii.begin()) - 1, 0, grid.nr - 1);
  double fr = std::clamp((r - grid.radii[i0]) / (grid.radii[i0 + 1] - grid.radii[i0]), 0.0, 1.0);

  double dtheta = 2.0 * kPi / grid.ntheta;
  double u = theta / dtheta - 0.5;
  int j0 = static_cast<int>(std::floor(u));
  double ft = u - j0;

  auto v = [&](int i, int j) { return psi[grid.node_id(i, j)]; };
  return (1.0 - fr) * ((1.0 - ft) * v(i0, j0) + ft * v(i0, j0 + 1)) +
         fr * ((1.0 - ft) * v(i0 + 1, j0) + ft * v(i0 + 1, j0 + 1));
}

FitReport solver_field_circulation(const ExteriorGrid& grid, const StreamField& field,
                                   const FarFieldState& base, double target_radius) {
  double outer_min = std::numeric_limits<double>::infinity();
  for (int j = 0; j < grid.ntheta; ++j)
    outer_min = std::min(outer_min, std::abs(grid.nodes[grid.node_id(grid.nr, j)]));
  if (1.3 * target_radius > outer_min)
    throw ConfigError("solver_field_circulation: sampling circles exceed the grid");

  std::vector<PsiSample> samples;
  samples.reserve(128);
  for (double radius : {target_radius, 1.3 * target_radius}) {
    for (int k = 0; k < 64; ++k) {
      double t = 2.0 * kPi * (k + 0.5) / 64.0;
      Complex z = std::polar(radius, t);
      samples.push_back({z.real(), z.imag(), interpolate_psi(grid, field.psi, z)});
    }
  }
  FitReport rep = fit_circulation(samples, base);
  rep.ring_radius = target_radius;
  return rep;
}

double LowMachTable::distance_at(double mach) const {
  for (const auto& r : rows)
    if (std::abs(r.mach - mach) < 1e-12) return r.distance;
  throw std::invalid_argument("low_mach_study: mach entry not found");
}

LowMachTable low_mach_study(const KTProfile& profile, double gas_gamma,
                            const std::vector<double>& mach_list, const ExteriorGrid& grid,
                            double tol) {
  SolveConfig base;
  base.gas = GasModel::incompressible(1.0);
  base.farfield = make_farfield(base.gas, profile.physical_speed(), profile.gamma);
  base.tol = tol;
  FvSolver solver(grid);
  StreamField ref = solver.solve(base);
  if (ref.status != SolveStatus::converged)
    throw std::runtime_error("low_mach_study: incompressible reference did not converge");

  KahanSum ref_norm;
  for (int c = 0; c < grid.cell_count(); ++c) {
    double w = grid.cells[c].area;
    ref_norm.add(w * (ref.vx[c] * ref.vx[c] + ref.vy[c] * ref.vy[c]));
  }

  LowMachTable table;
  for (double mach : mach_list) {
    LowMachRow row{mach, SolveStatus::converged, 0.0};
    if (mach > 0.0) {
      SolveConfig cfg;
      cfg.gas = gas_for_mach(gas_gamma, mach, profile.physical_speed());
      cfg.farfield = make_farfield(cfg.gas, profile.physical_speed(), profile.gamma);
      cfg.tol = tol;
      StreamField f = solver.solve(cfg);
      row.status = f.status;
      if (f.status == SolveStatus::converged) {
        KahanSum diff;
        for (int c = 0; c < grid.cell_count(); ++c) {
          double w = grid.cells[c].area;
          double dx = f.vx[c] - ref.vx[c], dy = f.vy[c] - ref.vy[c];
          diff.add(w * (dx * dx + dy * dy));
        }
        row.distance = std::sqrt(diff.value() / ref_norm.value());
      } else {
        row.distance = std::numeric_limits<double>::infinity();
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

std::vector<double> default_gamma_grid(Complex w_inf, int points) {
  auto kg = kutta_incompatibility(w_inf);
  double lo = std::min(kg.gamma_trailing, kg.gamma_leading);
  double hi = std::max(kg.gamma_trailing, kg.gamma_leading);
  if (kg.gap < 1e-12) {
    double span = 2.0 * kPi * std::max(std::abs(w_inf), 0.5);
    lo = -span;
    hi = span;
  } else {
    lo -= 0.5 * kg.gap;
    hi += 0.5 * kg.gap;
  }
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[k] = lo + (hi - lo) * k / (points - 1.0);
  return grid;
}

int resolve_thread_cap(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CORNERFLOW_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return static_cast<int>(std::clamp(hw, 1u, 8u));
}

void parallel_for_indexed(int n, int threads, const std::function<void(int)>& fn) {
  int cap = std::min(resolve_thread_cap(threads), n);
  if (cap <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(cap);
  for (int t = 0; t < cap; ++t) {
    pool.emplace_back([&]() {
      for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

NonexistenceReport nonexistence_probe(const KTProfile& profile, double mach_inf,
                                      std::vector<double> gamma_grid, const ProbeGridSpec& spec,
                                      int levels, double tol, int threads) {
  if (gamma_grid.empty()) gamma_grid = default_gamma_grid(profile.w_inf);
  NonexistenceReport rep;
  rep.gamma_grid = gamma_grid;
  rep.levels.resize(levels);

  parallel_for_indexed(levels, threads, [&](int level) {
    ExteriorGrid grid = build_refined(profile, spec.R, spec.nr, spec.ntheta, spec.stretch, level);
    FvSolver solver(grid);

    ProbeLevel out;
    out.nr = grid.nr;
    out.ntheta = grid.ntheta;
    out.probe_distance = 0.5 * (grid.corner[0].mean_distance + grid.corner[1].mean_distance);
    out.any_supersonic = false;
    out.corner_speed.resize(gamma_grid.size());

    for (std::size_t k = 0; k < gamma_grid.size(); ++k) {
      KTProfile p = profile;
      p.gamma = gamma_grid[k];
      SolveConfig cfg;
      if (mach_inf > 0.0) {
        cfg.gas = gas_for_mach(1.4, mach_inf, p.physical_speed());
      } else {
        cfg.gas = GasModel::incompressible(1.0);
      }
      cfg.farfield = make_farfield(cfg.gas, p.physical_speed(), p.gamma);
      cfg.tol = tol;
      StreamField f = solver.solve(cfg);
      if (f.status != SolveStatus::converged) {
        out.corner_speed[k] = std::numeric_limits<double>::infinity();
        out.any_supersonic = out.any_supersonic || f.status == SolveStatus::supersonic;
        continue;
      }
      double speed = 0.0;
      for (const auto& probe : grid.corner)
        for (int c : probe.cells) speed = std::max(speed, std::hypot(f.vx[c], f.vy[c]));
      out.corner_speed[k] = speed;
    }
    auto it = std::min_element(out.corner_speed.begin(), out.corner_speed.end());
    out.minimax = *it;
    out.gamma_at_min = gamma_grid[std::distance(out.corner_speed.begin(), it)];
    rep.levels[level] = std::move(out);
  });

  // growth exponent: log minimax vs log(1 / probe distance) on the last 3 levels
  int nfit = std::min(3, levels);
  std::vector<double> x, y;
  for (int l = levels - nfit; l < levels; ++l) {
    if (!std::isfinite(rep.levels[l].minimax)) continue;
    x.push_back(-std::log(rep.levels[l].probe_distance));
    y.push_back(std::log(rep.levels[l].minimax));
  }
  rep.growth_exponent = x.size() >= 2 ? fit_line(x, y).slope
                                      : std::numeric_limits<double>::infinity();
  if (levels >= 2 && std::isfinite(rep.levels[levels - 1].minimax) &&
      std::isfinite(rep.levels[levels - 2].minimax)) {
    rep.minimax_variation =
        std::abs(rep.levels[levels - 1].minimax / rep.levels[levels - 2].minimax - 1.0);
  } else {
    rep.minimax_variation = std::numeric_limits<double>::infinity();
  }
  return rep;
}

}  // namespace cornerflow

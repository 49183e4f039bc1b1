#pragma once

#include <functional>
#include <vector>

#include "cornerflow/conformal.hpp"
#include "cornerflow/farfield.hpp"
#include "cornerflow/grid.hpp"
#include "cornerflow/solver.hpp"

namespace cornerflow {

/// Fitted power-law behaviour of the speed approaching a corner.
struct CornerReport {
  Corner corner = Corner::trailing;
  std::vector<double> radii;   // strictly decreasing toward 0
  std::vector<double> speeds;  // |v| at those radii
  double slope = 0.0;          // d log|v| / d log r
  double intercept = 0.0;
  double r_squared = 0.0;
  double theoretical = 0.0;    // 1/nu - 1 for the profile at hand
  bool bounded = false;        // slope >= -0.02
};

/// Least-squares fit of log|v| vs log r. Requires >= 6 radii, strictly
/// decreasing, spanning at least two decades; non-finite speeds raise
/// std::domain_error.
CornerReport fit_corner_exponent(const std::function<double(double)>& speed_at,
                                 const std::vector<double>& radii, Corner corner,
                                 double theoretical);

/// Same fit on pre-tabulated (radius, speed) data (solver fields).
CornerReport fit_corner_exponent_data(std::vector<double> radii, std::vector<double> speeds,
                                      Corner corner, double theoretical);

/// Corner-exponent data extracted from a solved field: cell speeds sampled
/// at log-spaced distances along the outward corner bisector ([r_lo, r_hi]
/// must span two decades).
CornerReport solver_corner_exponent(const ExteriorGrid& grid, const StreamField& field,
                                    Corner corner, double r_lo, double r_hi, int points,
                                    double theoretical);

/// Cell containing the physical point z (circle-plane polar lookup).
int locate_cell(const ExteriorGrid& grid, Complex z);

struct KuttaGap {
  double gamma_trailing;
  double gamma_leading;
  double gap;  // 8 pi |Im w_inf|
};

/// Both Kutta circulations and their gap; zero gap iff w_inf is real.
KuttaGap kutta_incompatibility(Complex w_inf);

/// Bilinear (in the circle-plane polar coordinates) interpolation of nodal psi.
/// Throws ConfigError outside the grid annulus.
double interpolate_psi(const ExteriorGrid& grid, const std::vector<double>& psi, Complex z);

/// Circulation fitted from interpolated psi on the circles |z| = target_radius
/// and 1.3 * target_radius (exact circles keep the log column uncorrelated
/// with the decaying expansion remainder).
FitReport solver_field_circulation(const ExteriorGrid& grid, const StreamField& field,
                                   const FarFieldState& base, double target_radius);

struct LowMachRow {
  double mach;
  SolveStatus status;
  double distance;  // relative area-weighted L2 velocity distance to M = 0
};

struct LowMachTable {
  std::vector<LowMachRow> rows;
  double distance_at(double mach) const;
};

/// Solves the same profile across mach_list and reports velocity-field
/// distances to the incompressible solve; distances scale like M^2.
LowMachTable low_mach_study(const KTProfile& profile, double gas_gamma,
                            const std::vector<double>& mach_list, const ExteriorGrid& grid,
                            double tol = 1e-11);

struct ProbeGridSpec {
  double R = 30.0;
  int nr = 16;
  int ntheta = 32;
  double stretch = 1.10;
};

struct ProbeLevel {
  int nr, ntheta;
  double probe_distance;             // mean corner-probe centroid distance
  std::vector<double> corner_speed;  // per gamma; +inf marks supersonic aborts
  double minimax;
  double gamma_at_min;
  bool any_supersonic;
};

struct NonexistenceReport {
  std::vector<double> gamma_grid;
  std::vector<ProbeLevel> levels;
  double growth_exponent;     // log minimax vs log(1/probe distance), last 3 levels
  double minimax_variation;   // |minimax(last)/minimax(prev) - 1|
};

/// Circulation sweep across refinement levels recording the corner-probe
/// speed (or Mach blow-up evidence via supersonic aborts in compressible
/// runs). Growth of the minimax under refinement evidences non-existence;
/// stabilization evidences existence.
NonexistenceReport nonexistence_probe(const KTProfile& profile, double mach_inf,
                                      std::vector<double> gamma_grid, const ProbeGridSpec& spec,
                                      int levels, double tol = 1e-11, int threads = 0);

/// 21 points spanning [min - gap/2, max + gap/2] of the two Kutta values;
/// a +-2 pi |w| span around zero when the gap vanishes.
std::vector<double> default_gamma_grid(Complex w_inf, int points = 21);

/// Deterministic index-parallel map; threads <= 0 means the CORNERFLOW_THREADS
/// environment cap (default: hardware concurrency, at most 8).
void parallel_for_indexed(int n, int threads, const std::function<void(int)>& fn);

int resolve_thread_cap(int requested);

}  // namespace cornerflow

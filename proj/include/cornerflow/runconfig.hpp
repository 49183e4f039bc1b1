#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

#include "cornerflow/analysis.hpp"
#include "cornerflow/conformal.hpp"
#include "cornerflow/farfield.hpp"
#include "cornerflow/gas.hpp"
#include "cornerflow/grid.hpp"
#include "cornerflow/solver.hpp"

namespace cornerflow {

/// Schema-validated run description; unknown keys are rejected.
///
/// {
///   "profile":     {"nu": 1.5, "attack_angle_deg": 20.0, "w_inf_mag": 1.0},
///   "gas":         {"gamma": 1.4, "mach_inf": 0.3} | {"incompressible": true},
///   "circulation": 0.0 | "kutta_trailing" | "kutta_leading",
///   "grid":        {"R": 30.0, "Nr": 32, "Ntheta": 64, "stretch": 1.08},
///   "solver":      {"tol": 1e-11, "max_iter": 200, "damping": 0.7, "scheme": "picard"},
///   "outputs":     {"dir": "out", "formats": ["csv", "json", "svg"]},
///   "sweep":       {"kind": "nonexistence" | "low_mach", "levels": 4,
///                   "gamma_points": 21, "machs": [0.05, 0.1, 0.2]}
/// }
struct RunConfig {
  double nu = 1.5;
  double attack_angle_deg = 0.0;
  double w_inf_mag = 1.0;

  bool incompressible = true;
  double gas_gamma = 1.4;
  double mach_inf = 0.0;     // free-stream Mach; exclusive with bernoulli
  double bernoulli = 0.0;    // direct Bernoulli constant; 0 = unset

  double circulation_value = 0.0;
  int kutta_corner = -1;  // -1 plain value, 0 trailing, 1 leading

  double grid_R = 30.0;
  int grid_nr = 32;
  int grid_ntheta = 64;
  double grid_stretch = 1.08;

  double solver_tol = 1e-11;
  int solver_max_iter = 200;
  double solver_damping = 0.7;
  Scheme scheme = Scheme::picard;

  std::string out_dir = "out";
  std::vector<std::string> formats{"csv", "json"};

  std::string sweep_kind;  // empty unless a sweep config
  int sweep_levels = 3;
  int sweep_gamma_points = 21;
  std::vector<double> sweep_machs{0.05, 0.1, 0.2};

  static RunConfig from_json(const nlohmann::json& j);
  static RunConfig from_file(const std::filesystem::path& path);

  KTProfile profile() const;       // circulation resolved (Kutta choice applied)
  GasModel gas() const;
  FarFieldState farfield() const;
  ExteriorGrid grid() const;
  SolveConfig solve_config() const;
  bool wants(const std::string& format) const;

  nlohmann::json resolved() const;  // manifest echo of the effective settings
};

}  // namespace cornerflow

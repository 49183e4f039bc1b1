#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "cornerflow/farfield.hpp"
#include "cornerflow/gas.hpp"
#include "cornerflow/grid.hpp"

namespace cornerflow {

enum class Scheme { picard, newton };

enum class SolveStatus { converged, max_iterations, supersonic };

struct SolveConfig {
  GasModel gas = GasModel::incompressible();
  FarFieldState farfield{};
  double tol = 1e-11;       // on the scaled residual norm
  int max_iter = 200;
  double damping = 0.7;     // Picard under-relaxation, in (0, 1]
  Scheme scheme = Scheme::picard;
  /// Outer-ring Dirichlet data; defaults to the stream-function expansion
  /// psi_expansion with psi_const = 0. Overridable for oracle-boundary runs.
  std::function<double(Complex)> outer_dirichlet;
};

struct ConvergenceRecord {
  int iter;
  double residual;  // scaled
  double max_mach;  // max face Mach of the iterate
};

/// Discrete stream function and fields derived from it.
/// psi lives on nodes (body row exactly 0); velocity, density and Mach are
/// cell quantities built from Green-Gauss cell gradients.
struct StreamField {
  SolveStatus status = SolveStatus::converged;
  int iterations = 0;
  double residual = 0.0;    // final scaled residual norm
  double flux_scale = 1.0;
  double max_mach = 0.0;

  std::vector<double> psi;  // per node

  std::vector<double> psi_cell, vx, vy, rho, mach, momentum;  // per cell
  std::vector<std::uint8_t> cell_supersonic;

  std::vector<ConvergenceRecord> history;
  int supersonic_edge = -1;
  Complex supersonic_at{0.0, 0.0};
  double conservation_defect = 0.0;  // |outer-ring net flux - body-row net flux|
};

/// Net face-flux residual of g(grad psi) = h(|grad psi|^2/2) grad psi per
/// interior dual volume (entries for boundary nodes are zero).
/// Throws SupersonicFace if any face momentum reaches the sonic value.
std::vector<double> assemble_residual(const std::vector<double>& psi, const ExteriorGrid& grid,
                                      const GasModel& gas);

/// Per-cell derived quantities from nodal psi.
void derived_fields(StreamField& field, const ExteriorGrid& grid, const GasModel& gas);

/// Owns the factorization state for repeated solves on one grid
/// (the incompressible matrix is circulation-independent and is reused).
class FvSolver {
 public:
  explicit FvSolver(const ExteriorGrid& grid);
  ~FvSolver();
  FvSolver(const FvSolver&) = delete;
  FvSolver& operator=(const FvSolver&) = delete;

  StreamField solve(const SolveConfig& cfg, const std::vector<double>* initial_psi = nullptr);

  const ExteriorGrid& grid() const { return grid_; }

 private:
  struct Impl;
  const ExteriorGrid& grid_;
  std::unique_ptr<Impl> impl_;
};

/// One-shot convenience wrapper.
StreamField solve(const SolveConfig& cfg, const ExteriorGrid& grid,
                  const std::vector<double>* initial_psi = nullptr);

}  // namespace cornerflow

#include "cornerflow/solver.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseLU>
#include <cmath>
#include <numbers>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

struct EdgeData {
  std::vector<double> gx, gy, m, h, flux;
  void resize(std::size_t n) {
    gx.resize(n);
    gy.resize(n);
    m.resize(n);
    h.resize(n);
    flux.resize(n);
  }
};

std::vector<double> cell_vertex_psi(const ExteriorGrid& g, const std::vector<double>& psi) {
  std::vector<double> cp(g.cell_count());
  for (int c = 0; c < g.cell_count(); ++c) {
    auto nn = g.cell_nodes(c);
    cp[c] = 0.25 * (psi[nn[0]] + psi[nn[1]] + psi[nn[2]] + psi[nn[3]]);
  }
  return cp;
}

/// Diamond gradients and face momenta; returns the first sonic edge or -1.
int edge_gradients(const ExteriorGrid& g, const GasModel& gas, const std::vector<double>& psi,
                   const std::vector<double>& cp, EdgeData& ed) {
  const bool compressible = !gas.is_incompressible();
  const double m_sonic = compressible ? gas.sonic_momentum() : 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const GridEdge& ge = g.edges[e];
    double dpsi = psi[ge.n1] - psi[ge.n0];
    double dcell = cp[ge.cell_right] - cp[ge.cell_left];
    double gx = ge.inv2ad * (dpsi * ge.a.real() + dcell * ge.b.real());
    double gy = ge.inv2ad * (dpsi * ge.a.imag() + dcell * ge.b.imag());
    ed.gx[e] = gx;
    ed.gy[e] = gy;
    ed.m[e] = 0.5 * (gx * gx + gy * gy);
    if (compressible && ed.m[e] >= m_sonic) return static_cast<int>(e);
  }
  return -1;
}

void edge_h_from_m(const ExteriorGrid& g, const GasModel& gas, EdgeData& ed) {
  if (gas.is_incompressible()) {
    std::fill(ed.h.begin(), ed.h.end(), 1.0 / gas.rho_ref());
    return;
  }
  for (std::size_t e = 0; e < g.edges.size(); ++e) ed.h[e] = gas.h_div(ed.m[e]);
}

void edge_fluxes(const ExteriorGrid& g, const std::vector<double>& psi,
                 const std::vector<double>& cp, EdgeData& ed) {
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const GridEdge& ge = g.edges[e];
    double dpsi = psi[ge.n1] - psi[ge.n0];
    double dcell = cp[ge.cell_right] - cp[ge.cell_left];
    ed.flux[e] = ed.h[e] * (ge.alpha_geom * dpsi + ge.cross_geom * dcell);
  }
}

/// Net outflux per node; meaningful (and accumulated) for interior nodes only.
std::vector<double> node_residuals(const ExteriorGrid& g, const EdgeData& ed) {
  std::vector<double> r(g.node_count(), 0.0);
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    const GridEdge& ge = g.edges[e];
    r[ge.n0] += ed.flux[e];
    r[ge.n1] -= ed.flux[e];
  }
  for (int n = 0; n < g.node_count(); ++n)
    if (!g.is_interior_node(n)) r[n] = 0.0;
  return r;
}

double scaled_rms(const ExteriorGrid& g, const std::vector<double>& r, double fscale) {
  KahanSum s;
  for (int n = 0; n < g.node_count(); ++n)
    if (g.is_interior_node(n)) s.add(r[n] * r[n]);
  return std::sqrt(s.value() / g.interior_count()) / fscale;
}

double max_face_mach(const ExteriorGrid& g, const GasModel& gas, const EdgeData& ed) {
  if (gas.is_incompressible()) return 0.0;
  double mm = 0.0;
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    double rho = 1.0 / ed.h[e];
    double q = ed.h[e] * std::sqrt(2.0 * ed.m[e]);
    mm = std::max(mm, q / std::sqrt(gas.sound_speed_sq(rho)));
  }
  return mm;
}

double dual_face_mean(const ExteriorGrid& g) {
  KahanSum s;
  for (const auto& e : g.edges) s.add(std::abs(e.a));
  return s.value() / static_cast<double>(g.edges.size());
}

/// Bootstrap h from the far-field velocity expansion; initial-guess only,
/// so out-of-range states fall back to the stagnation value.
void bootstrap_h(const ExteriorGrid& g, const GasModel& gas, const FarFieldState& ff,
                 EdgeData& ed) {
  if (gas.is_incompressible()) {
    std::fill(ed.h.begin(), ed.h.end(), 1.0 / gas.rho_ref());
    return;
  }
  const double m_sonic = gas.sonic_momentum();
  for (std::size_t e = 0; e < g.edges.size(); ++e) {
    Complex mid = 0.5 * (g.nodes[g.edges[e].n0] + g.nodes[g.edges[e].n1]);
    auto v = velocity_expansion(mid.real(), mid.imag(), ff);
    double q = std::hypot(v.x, v.y);
    double h = 1.0 / gas.stagnation_density();
    if (q < 0.99 * gas.limit_speed()) {
      double rho = gas.density_from_speed(q);
      double m = 0.5 * rho * rho * q * q;
      if (m < 0.999 * m_sonic) h = gas.h_div(m);
    }
    ed.h[e] = h;
  }
}

}  // namespace

std::vector<double> assemble_residual(const std::vector<double>& psi, const ExteriorGrid& grid,
                                      const GasModel& gas) {
  if (static_cast<int>(psi.size()) != grid.node_count())
    throw ConfigError("assemble_residual: psi size does not match the grid");
  EdgeData ed;
  ed.resize(grid.edges.size());
  auto cp = cell_vertex_psi(grid, psi);
  int sonic = edge_gradients(grid, gas, psi, cp, ed);
  if (sonic >= 0) {
    const GridEdge& ge = grid.edges[sonic];
    Complex mid = 0.5 * (grid.nodes[ge.n0] + grid.nodes[ge.n1]);
    throw SupersonicFace("assemble_residual: face momentum at or past the sonic value", sonic,
                         mid.real(), mid.imag(), ed.m[sonic]);
  }
  edge_h_from_m(grid, gas, ed);
  edge_fluxes(grid, psi, cp, ed);
  return node_residuals(grid, ed);
}

void derived_fields(StreamField& field, const ExteriorGrid& grid, const GasModel& gas) {
  const int nc = grid.cell_count();
  field.psi_cell.resize(nc);
  field.vx.resize(nc);
  field.vy.resize(nc);
  field.rho.resize(nc);
  field.mach.resize(nc);
  field.momentum.resize(nc);
  field.cell_supersonic.assign(nc, 0);
  const bool compressible = !gas.is_incompressible();
  const double m_sonic = compressible ? gas.sonic_momentum() : 0.0;

  for (int c = 0; c < nc; ++c) {
    auto nn = grid.cell_nodes(c);
    // Green-Gauss over the quad; exact for nodal samples of linear fields
    Complex acc{0.0, 0.0};
    for (int k = 0; k < 4; ++k) {
      int a = nn[k], b = nn[(k + 1) % 4];
      double pf = 0.5 * (field.psi[a] + field.psi[b]);
      acc += pf * rot_cw(grid.nodes[b] - grid.nodes[a]);
    }
    double gx = acc.real() / grid.cells[c].area;
    double gy = acc.imag() / grid.cells[c].area;
    double m = 0.5 * (gx * gx + gy * gy);
    field.psi_cell[c] = 0.25 * (field.psi[nn[0]] + field.psi[nn[1]] + field.psi[nn[2]] + field.psi[nn[3]]);
    field.momentum[c] = m;
    if (compressible && m >= m_sonic) {
      field.cell_supersonic[c] = 1;
      field.vx[c] = field.vy[c] = field.rho[c] = field.mach[c] =
          std::numeric_limits<double>::quiet_NaN();
      continue;
    }
    double h = compressible ? gas.h_div(m) : 1.0 / gas.rho_ref();
    // v = -h grad^perp psi = h (psi_y, -psi_x)
    field.vx[c] = h * gy;
    field.vy[c] = -h * gx;
    field.rho[c] = 1.0 / h;
    field.mach[c] = compressible
                        ? std::hypot(field.vx[c], field.vy[c]) / std::sqrt(gas.sound_speed_sq(field.rho[c]))
                        : 0.0;
  }
}

struct FvSolver::Impl {
  Eigen::SimplicialLDLT<SpMat> ldlt;
  bool pattern_analyzed = false;
  bool incomp_factored = false;
};

FvSolver::FvSolver(const ExteriorGrid& grid) : grid_(grid), impl_(std::make_unique<Impl>()) {}
FvSolver::~FvSolver() = default;

StreamField FvSolver::solve(const SolveConfig& cfg, const std::vector<double>* initial_psi) {
  const ExteriorGrid& g = grid_;
  const GasModel& gas = cfg.gas;
  const FarFieldState& ff = cfg.farfield;
  if (!(cfg.tol > 0.0)) throw ConfigError("solve: tolerance must be positive");
  if (!(cfg.damping > 0.0 && cfg.damping <= 1.0)) throw ConfigError("solve: damping must be in (0,1]");
  if (!(ff.mach_inf < 1.0)) throw ConfigError("solve: free stream must be subsonic");

  StreamField field;
  field.psi.assign(g.node_count(), 0.0);

  // Dirichlet data: body row zero, outer ring from the expansion (or override)
  auto outer_value = [&](Complex z) {
    return cfg.outer_dirichlet ? cfg.outer_dirichlet(z) : psi_expansion(z.real(), z.imag(), ff);
  };
  std::vector<double> dirichlet(g.node_count(), 0.0);
  for (int j = 0; j < g.ntheta; ++j) {
    int n = g.node_id(g.nr, j);
    dirichlet[n] = outer_value(g.nodes[n]);
  }

  if (initial_psi) {
    if (static_cast<int>(initial_psi->size()) != g.node_count())
      throw ConfigError("solve: initial psi size does not match the grid");
    field.psi = *initial_psi;
  } else {
    for (int n = 0; n < g.node_count(); ++n) {
      Complex z = g.nodes[n];
      field.psi[n] = psi_expansion(z.real(), z.imag(), ff);
    }
  }
  for (int j = 0; j < g.ntheta; ++j) field.psi[g.node_id(0, j)] = 0.0;
  for (int j = 0; j < g.ntheta; ++j) field.psi[g.node_id(g.nr, j)] = dirichlet[g.node_id(g.nr, j)];

  const int ni = g.interior_count();
  const double q_ref = std::max({ff.v_inf, std::abs(ff.gamma) / (2.0 * std::numbers::pi), 1e-12});
  field.flux_scale = q_ref * dual_face_mean(g);

  EdgeData ed;
  ed.resize(g.edges.size());

  const bool incompressible = gas.is_incompressible();
  SpMat A(ni, ni);
  Eigen::VectorXd rhs(ni), sol(ni);

  auto build_and_solve_picard = [&](bool bootstrap) -> bool {
    // h per edge: bootstrap uses the expansion state, later passes the iterate
    auto cp = cell_vertex_psi(g, field.psi);
    if (bootstrap) {
      bootstrap_h(g, gas, ff, ed);
    } else {
      int sonic = edge_gradients(g, gas, field.psi, cp, ed);
      if (sonic >= 0) {
        const GridEdge& ge = g.edges[sonic];
        field.status = SolveStatus::supersonic;
        field.supersonic_edge = sonic;
        field.supersonic_at = 0.5 * (g.nodes[ge.n0] + g.nodes[ge.n1]);
        return false;
      }
      edge_h_from_m(g, gas, ed);
    }

    std::vector<Triplet> trips;
    trips.reserve(g.edges.size() * 4);
    rhs.setZero();
    for (std::size_t e = 0; e < g.edges.size(); ++e) {
      const GridEdge& ge = g.edges[e];
      double ha = ed.h[e] * ge.alpha_geom;
      double cflux = ed.h[e] * ge.cross_geom * (cp[ge.cell_right] - cp[ge.cell_left]);
      bool i0 = g.is_interior_node(ge.n0), i1 = g.is_interior_node(ge.n1);
      int k0 = i0 ? g.interior_index(ge.n0) : -1;
      int k1 = i1 ? g.interior_index(ge.n1) : -1;
      if (i0) {
        trips.emplace_back(k0, k0, ha);
        if (i1) trips.emplace_back(k0, k1, -ha);
        else rhs[k0] += ha * field.psi[ge.n1];
        rhs[k0] += cflux;  // -R convention: lagged cross flux to the right side
      }
      if (i1) {
        trips.emplace_back(k1, k1, ha);
        if (i0) trips.emplace_back(k1, k0, -ha);
        else rhs[k1] += ha * field.psi[ge.n0];
        rhs[k1] -= cflux;
      }
    }

    bool reuse = incompressible && impl_->incomp_factored;
    if (!reuse) {
      A.setFromTriplets(trips.begin(), trips.end());
      if (!impl_->pattern_analyzed) {
        impl_->ldlt.analyzePattern(A);
        impl_->pattern_analyzed = true;
      }
      impl_->ldlt.factorize(A);
      if (impl_->ldlt.info() != Eigen::Success)
        throw std::runtime_error("solve: LDLT factorization failed (matrix not SPD?)");
      // a compressible factorization clobbers a cached incompressible one
      impl_->incomp_factored = incompressible;
    }
    sol = impl_->ldlt.solve(rhs);

    // the bootstrap pass replaces the boundary-incompatible expansion guess
    double w = bootstrap ? 1.0 : cfg.damping;
    for (int n = 0; n < g.node_count(); ++n)
      if (g.is_interior_node(n))
        field.psi[n] += w * (sol[g.interior_index(n)] - field.psi[n]);
    return true;
  };

  auto full_residual = [&]() -> double {
    auto cp = cell_vertex_psi(g, field.psi);
    int sonic = edge_gradients(g, gas, field.psi, cp, ed);
    if (sonic >= 0) {
      const GridEdge& ge = g.edges[sonic];
      field.status = SolveStatus::supersonic;
      field.supersonic_edge = sonic;
      field.supersonic_at = 0.5 * (g.nodes[ge.n0] + g.nodes[ge.n1]);
      return -1.0;
    }
    edge_h_from_m(g, gas, ed);
    edge_fluxes(g, field.psi, cp, ed);
    auto r = node_residuals(g, ed);
    field.max_mach = std::max(field.max_mach, max_face_mach(g, gas, ed));
    return scaled_rms(g, r, field.flux_scale);
  };

  // incompressible: the two-point matrix is h-independent (h is a uniform
  // factor of the whole equation), so the factorization is reused verbatim
  int iter = 0;
  double res = std::numeric_limits<double>::infinity();
  bool newton_phase = false;
  Eigen::SparseLU<SpMat> lu;

  while (iter < cfg.max_iter) {
    ++iter;
    if (!newton_phase) {
      if (!build_and_solve_picard(iter == 1 && !initial_psi)) return field;  // supersonic abort
    } else {
      // Newton with the exact edge-flux Jacobian (h' rank-one face terms)
      auto cp = cell_vertex_psi(g, field.psi);
      int sonic = edge_gradients(g, gas, field.psi, cp, ed);
      if (sonic >= 0) {
        field.status = SolveStatus::supersonic;
        field.supersonic_edge = sonic;
        return field;
      }
      edge_h_from_m(g, gas, ed);
      edge_fluxes(g, field.psi, cp, ed);
      auto r = node_residuals(g, ed);

      std::vector<Triplet> trips;
      trips.reserve(g.edges.size() * 24);
      auto add = [&](int row_node, int col_node, double v) {
        if (g.is_interior_node(row_node) && g.is_interior_node(col_node))
          trips.emplace_back(g.interior_index(row_node), g.interior_index(col_node), v);
      };
      for (std::size_t e = 0; e < g.edges.size(); ++e) {
        const GridEdge& ge = g.edges[e];
        double hp = gas.is_incompressible() ? 0.0 : gas.h_div_prime(ed.m[e]);
        double ga = ed.gx[e] * ge.a.real() + ed.gy[e] * ge.a.imag();  // grad . a
        auto dflux = [&](Complex cdir) {
          double gc = ed.gx[e] * cdir.real() + ed.gy[e] * cdir.imag();
          double ca = dot(cdir, ge.a);
          return hp * gc * ga + ed.h[e] * ca;
        };
        Complex cn1 = ge.inv2ad * ge.a;  // d grad / d psi_n1
        double d_n1 = dflux(cn1), d_n0 = -d_n1;
        // far nodes: quarter-weight through the cell vertex means
        auto cell_far = [&](int cell, double sgn) {
          auto nn = g.cell_nodes(cell);
          for (int k = 0; k < 4; ++k) {
            if (nn[k] == ge.n0 || nn[k] == ge.n1) continue;
            double dv = dflux(sgn * 0.25 * ge.inv2ad * ge.b);
            add(ge.n0, nn[k], -dv);  // row n0 of -R
            add(ge.n1, nn[k], +dv);
          }
        };
        add(ge.n0, ge.n0, -d_n0);
        add(ge.n0, ge.n1, -d_n1);
        add(ge.n1, ge.n0, +d_n0);
        add(ge.n1, ge.n1, +d_n1);
        cell_far(ge.cell_right, +1.0);
        cell_far(ge.cell_left, -1.0);
      }
      SpMat J(ni, ni);
      J.setFromTriplets(trips.begin(), trips.end());
      Eigen::VectorXd G(ni);
      for (int n = 0; n < g.node_count(); ++n)
        if (g.is_interior_node(n)) G[g.interior_index(n)] = -r[n];
      lu.compute(J);
      if (lu.info() != Eigen::Success) throw std::runtime_error("solve: Newton LU failed");
      Eigen::VectorXd delta = lu.solve(-G);

      // line search on the residual norm
      std::vector<double> saved = field.psi;
      double step = 1.0, best = res;
      for (int ls = 0; ls < 6; ++ls) {
        field.psi = saved;
        for (int n = 0; n < g.node_count(); ++n)
          if (g.is_interior_node(n)) field.psi[n] += step * delta[g.interior_index(n)];
        double cand = full_residual();
        if (cand >= 0.0 && cand < best) break;
        step *= 0.5;
      }
    }

    res = full_residual();
    if (res < 0.0) return field;  // supersonic abort
    field.history.push_back({iter, res, field.max_mach});
    if (res < cfg.tol) {
      field.status = SolveStatus::converged;
      break;
    }
    if (cfg.scheme == Scheme::newton && !newton_phase && res < 1e-3) newton_phase = true;
  }
  field.iterations = iter;
  field.residual = res;
  if (res >= cfg.tol) field.status = SolveStatus::max_iterations;

  // telescoped conservation: net flux through the outer ring vs the body row
  {
    KahanSum body, outer;
    for (int j = 0; j < g.ntheta; ++j) {
      body.add(ed.flux[0 * g.ntheta + j]);
      outer.add(ed.flux[(g.nr - 1) * g.ntheta + j]);
    }
    field.conservation_defect = std::abs(outer.value() - body.value());
  }

  derived_fields(field, g, gas);
  return field;
}

StreamField solve(const SolveConfig& cfg, const ExteriorGrid& grid,
                  const std::vector<double>* initial_psi) {
  FvSolver s(grid);
  return s.solve(cfg, initial_psi);
}

}  // namespace cornerflow

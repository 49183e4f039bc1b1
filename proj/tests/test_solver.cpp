#include "cornerflow/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cornerflow/errors.hpp"
#include "doctest.h"

using namespace cornerflow;

namespace {
constexpr double kPi = std::numbers::pi;

SolveConfig incompressible_config(const KTProfile& p, double rho = 1.0) {
  SolveConfig cfg;
  cfg.gas = GasModel::incompressible(rho);
  cfg.farfield = make_farfield(cfg.gas, p.physical_speed(), p.gamma);
  return cfg;
}

// nodal max |psi - oracle| against the incompressible conformal solution
double linf_vs_conformal(const ExteriorGrid& g, const StreamField& f, const KTProfile& p,
                         double rho) {
  double err = 0.0;
  for (int n = 0; n < g.node_count(); ++n) {
    Complex z_lens = g.nodes[n] / g.rotation;
    double oracle = rho * z_potential(z_lens, p).imag();
    err = std::max(err, std::abs(f.psi[n] - oracle));
  }
  return err;
}
}  // namespace

TEST_CASE("assemble_residual: exact for linear fields (incompressible)") {
  auto p = KTProfile::from_circle_freestream(1.5, std::polar(1.0, 0.2), 0.7);
  auto g = build_grid(p, 8.0, 12, 24, 1.05);
  std::vector<double> psi(g.node_count());
  for (int n = 0; n < g.node_count(); ++n) psi[n] = 0.35 * g.nodes[n].imag();
  auto r = assemble_residual(psi, g, GasModel::incompressible());
  double scale = 0.35 * g.mean_edge_len;
  for (int n = 0; n < g.node_count(); ++n) CHECK(std::abs(r[n]) < 1e-12 * scale);
}

TEST_CASE("assemble_residual: O(h^2) truncation on the analytic circle flow") {
  KTProfile p{1.0, {1.0, 0.0}, 1.0};
  double norms[2];
  int k = 0;
  for (int n : {24, 48}) {
    auto g = build_grid(p, 4.0, n, 2 * n, 1.0);
    std::vector<double> psi(g.node_count());
    for (int nn = 0; nn < g.node_count(); ++nn) psi[nn] = z_potential(g.nodes[nn], p).imag();
    auto r = assemble_residual(psi, g, GasModel::incompressible());
    KahanSum s;
    for (int nn = 0; nn < g.node_count(); ++nn) s.add(r[nn] * r[nn]);
    // truncation flux ~ h^2 * facelength ~ h^3; normalize by h (face length)
    norms[k++] = std::sqrt(s.value() / g.interior_count()) / g.mean_edge_len;
  }
  double rate = std::log2(norms[0] / norms[1]);
  CHECK(rate > 1.7);
}

TEST_CASE("assemble_residual: supersonic face throws with location") {
  KTProfile p{1.0, {1.0, 0.0}, 0.0};
  auto g = build_grid(p, 6.0, 8, 16, 1.0);
  auto gas = gas_for_mach(1.4, 0.5, 1.0);
  std::vector<double> psi(g.node_count(), 0.0);
  // an absurd gradient on one cell ring forces a sonic face
  for (int j = 0; j < g.ntheta; ++j) psi[g.node_id(3, j)] = 100.0;
  CHECK_THROWS_AS(assemble_residual(psi, g, gas), SupersonicFace);
}

TEST_CASE("solve: horizontal plate recovers the uniform stream exactly") {
  KTProfile p{2.0, {1.0, 0.0}, 0.0};
  auto g = build_grid(p, 10.0, 16, 32, 1.05);
  auto cfg = incompressible_config(p, 1.3);
  auto f = solve(cfg, g);
  REQUIRE(f.status == SolveStatus::converged);
  double rho_v = 1.3 * p.physical_speed();
  for (int n = 0; n < g.node_count(); ++n)
    CHECK(std::abs(f.psi[n] - rho_v * g.nodes[n].imag()) < 1e-10);
  // derived fields: uniform velocity and density
  for (int c = 0; c < g.cell_count(); ++c) {
    CHECK(f.vx[c] == doctest::Approx(p.physical_speed()).epsilon(1e-9));
    CHECK(std::abs(f.vy[c]) < 1e-9);
    CHECK(f.rho[c] == doctest::Approx(1.3).epsilon(1e-12));
  }
}

TEST_CASE("solve: circle with circulation converges at second order to the oracle") {
  KTProfile p{1.0, {1.0, 0.0}, 1.0};
  double errs[2];
  int k = 0;
  for (int n : {32, 64}) {
    auto g = build_grid(p, 4.0, n, n, 1.0);
    auto cfg = incompressible_config(p);
    cfg.tol = 1e-13;
    cfg.outer_dirichlet = [&](Complex z) { return z_potential(z, p).imag(); };
    auto f = solve(cfg, g);
    REQUIRE(f.status == SolveStatus::converged);
    errs[k++] = linf_vs_conformal(g, f, p, 1.0);
  }
  double order = std::log2(errs[0] / errs[1]);
  CHECK(order >= 1.8);
  CHECK(errs[1] < 2e-3);
}

TEST_CASE("solve: discrete conservation telescopes") {
  KTProfile p{1.5, std::polar(1.0, 0.3), 1.2};
  auto g = build_grid(p, 12.0, 16, 32, 1.08);
  auto cfg = incompressible_config(p);
  cfg.tol = 1e-13;
  auto f = solve(cfg, g);
  REQUIRE(f.status == SolveStatus::converged);
  double scale = f.flux_scale * g.ntheta;
  CHECK(f.conservation_defect < 1e-10 * scale);
}

TEST_CASE("solve: incompressible symmetric flow obeys the discrete maximum principle") {
  KTProfile p{1.0, {1.0, 0.0}, 0.0};
  auto g = build_grid(p, 5.0, 16, 32, 1.0);
  auto cfg = incompressible_config(p);
  cfg.tol = 1e-13;
  auto f = solve(cfg, g);
  REQUIRE(f.status == SolveStatus::converged);
  double bmin = 0.0, bmax = 0.0;
  for (int j = 0; j < g.ntheta; ++j) {
    double v = f.psi[g.node_id(g.nr, j)];
    bmin = std::min(bmin, v);
    bmax = std::max(bmax, v);
  }
  double scale = std::max(std::abs(bmin), std::abs(bmax));
  for (int n = 0; n < g.node_count(); ++n) {
    CHECK(f.psi[n] >= bmin - 1e-10 * scale);
    CHECK(f.psi[n] <= bmax + 1e-10 * scale);
  }
}

TEST_CASE("solve: vertical plate with zero circulation is antisymmetric in y") {
  KTProfile p{2.0, std::polar(1.0, kPi / 2.0), 0.0};
  auto g = build_grid(p, 10.0, 24, 48, 1.05);
  auto cfg = incompressible_config(p);
  cfg.tol = 1e-13;
  auto f = solve(cfg, g);
  REQUIRE(f.status == SolveStatus::converged);
  double scale = cfg.farfield.rho_inf * cfg.farfield.v_inf * 2.0;
  for (int i = 0; i <= g.nr; ++i) {
    for (int j = 0; j < g.ntheta; ++j) {
      int jm = g.wrap(g.ntheta / 2 - 1 - j);
      // mirror node: conj(z_ij) = z_i,jm
      CHECK(std::abs(std::conj(g.nodes[g.node_id(i, j)]) - g.nodes[g.node_id(i, jm)]) < 1e-12);
      CHECK(std::abs(f.psi[g.node_id(i, j)] + f.psi[g.node_id(i, jm)]) < 1e-8 * scale);
    }
  }
}

TEST_CASE("solve: pure vortex far field decays like 1/|z|") {
  KTProfile p{1.0, {0.0, 0.0}, 2.0 * kPi};
  auto g = build_grid(p, 20.0, 32, 48, 1.05);
  auto cfg = incompressible_config(p);
  cfg.farfield = make_farfield(cfg.gas, 0.0, p.gamma);
  cfg.tol = 1e-13;
  auto f = solve(cfg, g);
  REQUIRE(f.status == SolveStatus::converged);
  for (int j = 0; j < g.ntheta; j += 5) {
    int c = g.cell_id(g.nr / 2, j);
    double r = std::abs(g.cells[c].centroid);
    double speed = std::hypot(f.vx[c], f.vy[c]);
    CHECK(speed == doctest::Approx(1.0 / r).epsilon(0.05));
  }
}

TEST_CASE("solve: compressible circle, Picard and Newton agree") {
  KTProfile p{1.0, {1.0, 0.0}, 1.0};
  auto g = build_grid(p, 8.0, 24, 48, 1.05);
  SolveConfig cfg;
  cfg.gas = gas_for_mach(1.4, 0.3, p.physical_speed());
  cfg.farfield = make_farfield(cfg.gas, p.physical_speed(), p.gamma);
  cfg.tol = 1e-12;
  auto fp = solve(cfg, g);
  REQUIRE(fp.status == SolveStatus::converged);
  CHECK(fp.max_mach < 1.0);
  CHECK(fp.max_mach > 0.3);  // acceleration past the free stream

  cfg.scheme = Scheme::newton;
  auto fn = solve(cfg, g);
  REQUIRE(fn.status == SolveStatus::converged);
  CHECK(fn.iterations <= fp.iterations);
  double dmax = 0.0;
  for (int n = 0; n < g.node_count(); ++n) dmax = std::max(dmax, std::abs(fp.psi[n] - fn.psi[n]));
  double scale = cfg.farfield.rho_inf * cfg.farfield.v_inf * 2.0;
  CHECK(dmax < 1e-9 * scale);

  // residual history decreases monotonically after the bootstrap step
  for (std::size_t k = 2; k < fp.history.size(); ++k)
    CHECK(fp.history[k].residual <= fp.history[k - 1].residual * 1.01);
}

TEST_CASE("solve: uniqueness evidence, two initializations agree") {
  KTProfile p{1.0, {1.0, 0.0}, 1.0};
  auto g = build_grid(p, 8.0, 24, 48, 1.05);
  SolveConfig cfg;
  cfg.gas = gas_for_mach(1.4, 0.25, p.physical_speed());
  cfg.farfield = make_farfield(cfg.gas, p.physical_speed(), p.gamma);
  cfg.tol = 1e-12;
  auto fa = solve(cfg, g);
  REQUIRE(fa.status == SolveStatus::converged);

  // perturbed start: a boundary-compatible subsonic field away from the
  // fixed point (incompressible solution at matched density, smooth bump)
  auto cfg0 = incompressible_config(p, cfg.farfield.rho_inf);
  auto f0 = solve(cfg0, g);
  REQUIRE(f0.status == SolveStatus::converged);
  std::vector<double> init = f0.psi;
  for (int n = 0; n < g.node_count(); ++n) {
    double r = std::abs(g.nodes[n]);
    init[n] *= 1.0 + 0.05 * std::exp(-0.5 * (r - 3.0) * (r - 3.0));
  }
  auto fb = solve(cfg, g, &init);
  REQUIRE(fb.status == SolveStatus::converged);
  double dmax = 0.0;
  for (int n = 0; n < g.node_count(); ++n) dmax = std::max(dmax, std::abs(fa.psi[n] - fb.psi[n]));
  double scale = cfg.farfield.rho_inf * cfg.farfield.v_inf * 2.0;
  CHECK(dmax < 10.0 * cfg.tol * scale);
}

TEST_CASE("solve: supersonic abort is flagged, not clipped") {
  KTProfile p{1.0, {1.0, 0.0}, 0.0};
  auto g = build_grid(p, 6.0, 16, 32, 1.0);
  SolveConfig cfg;
  cfg.gas = gas_for_mach(1.4, 0.85, p.physical_speed());
  cfg.farfield = make_farfield(cfg.gas, p.physical_speed(), 0.0);
  auto f = solve(cfg, g);
  CHECK(f.status == SolveStatus::supersonic);
  CHECK(f.supersonic_edge >= 0);

  // max_iter exhaustion is reported as non-convergence
  SolveConfig cfg2;
  cfg2.gas = gas_for_mach(1.4, 0.3, p.physical_speed());
  cfg2.farfield = make_farfield(cfg2.gas, p.physical_speed(), 0.0);
  cfg2.max_iter = 2;
  cfg2.tol = 1e-14;
  auto f2 = solve(cfg2, g);
  CHECK(f2.status == SolveStatus::max_iterations);
}

TEST_CASE("assemble_residual: expansion field residual concentrates near the body") {
  KTProfile p{1.0, {1.0, 0.0}, 1.0};
  auto g = build_grid(p, 30.0, 24, 48, 1.12);
  auto gas = gas_for_mach(1.4, 0.2, p.physical_speed());
  auto ff = make_farfield(gas, p.physical_speed(), p.gamma);
  std::vector<double> psi(g.node_count());
  for (int n = 0; n < g.node_count(); ++n)
    psi[n] = psi_expansion(g.nodes[n].real(), g.nodes[n].imag(), ff);
  auto r = assemble_residual(psi, g, gas);
  // residual density: net flux defect per dual-volume area
  auto ring_density = [&](int i) {
    double m = 0.0;
    for (int j = 0; j < g.ntheta; ++j) {
      double area = 0.25 * (g.cells[g.cell_id(i - 1, j - 1)].area + g.cells[g.cell_id(i - 1, j)].area +
                            g.cells[g.cell_id(i, j - 1)].area + g.cells[g.cell_id(i, j)].area);
      m = std::max(m, std::abs(r[g.node_id(i, j)]) / area);
    }
    return m;
  };
  CHECK(ring_density(1) > 100.0 * ring_density(g.nr - 1));
}

TEST_CASE("derived_fields: uniform stream from linear psi") {
  KTProfile p{1.0, {1.0, 0.0}, 0.0};
  auto g = build_grid(p, 6.0, 8, 16, 1.0);
  auto gas = GasModel::polytropic_stagnation_unit(1.4);
  double v = 0.3, rho = gas.density_from_speed(v);
  StreamField f;
  f.psi.resize(g.node_count());
  for (int n = 0; n < g.node_count(); ++n) f.psi[n] = rho * v * g.nodes[n].imag();
  derived_fields(f, g, gas);
  for (int c = 0; c < g.cell_count(); ++c) {
    CHECK(f.vx[c] == doctest::Approx(v).epsilon(1e-12));
    CHECK(std::abs(f.vy[c]) < 1e-13);
    CHECK(f.rho[c] == doctest::Approx(rho).epsilon(1e-12));
    CHECK(f.mach[c] == doctest::Approx(gas.mach_from_speed(v)).epsilon(1e-10));
  }
}

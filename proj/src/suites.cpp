#include "cornerflow/suites.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <random>
#include <sstream>

#include "cornerflow/analysis.hpp"
#include "cornerflow/errors.hpp"
#include "cornerflow/subsolution.hpp"

namespace cornerflow {

namespace {

constexpr double kPi = std::numbers::pi;

struct Check {
  bool ok = true;
  std::ostringstream detail;

  void require(bool cond, const std::string& what) {
    ok = ok && cond;
    if (!detail.str().empty()) detail << "; ";
    detail << (cond ? "" : "FAIL: ") << what;
  }
  static std::string q(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
  }
};

// 1. Kutta formulas: W~'(corner) vanishes at the Kutta circulation; gap closed form.
Check suite_kutta_formulas(std::mt19937_64& rng) {
  Check c;
  std::uniform_real_distribution<double> mag(0.2, 3.0), ang(-kPi, kPi);
  double worst_t = 0.0, worst_l = 0.0, worst_gap = 0.0;
  for (int k = 0; k < 100; ++k) {
    Complex w = std::polar(mag(rng), ang(rng));
    KTProfile pt{1.5, w, kutta_gamma(Corner::trailing, w)};
    KTProfile pl{1.5, w, kutta_gamma(Corner::leading, w)};
    worst_t = std::max(worst_t, std::abs(circle_potential_deriv({1.0, 0.0}, pt)));
    worst_l = std::max(worst_l, std::abs(circle_potential_deriv({-1.0, 0.0}, pl)));
    auto kg = kutta_incompatibility(w);
    double expect = 8.0 * kPi * std::abs(w.imag());
    worst_gap = std::max(worst_gap, std::abs(kg.gap - expect) / std::max(expect, 1e-300));
  }
  c.require(worst_t < 1e-13, "max |W~'(1)| = " + Check::q(worst_t) + " < 1e-13");
  c.require(worst_l < 1e-13, "max |W~'(-1)| = " + Check::q(worst_l) + " < 1e-13");
  c.require(worst_gap < 1e-13, "gap vs 8 pi |Im w|: rel err " + Check::q(worst_gap) + " < 1e-13");
  return c;
}

// 2. Karman-Trefftz map roundtrip on exterior samples; corners fixed exactly.
Check suite_kt_roundtrip(std::mt19937_64& rng) {
  Check c;
  std::uniform_real_distribution<double> ur(std::log(1.001), std::log(50.0)), ut(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (double nu : {1.1, 1.5, 1.9, 2.0}) {
    for (int k = 0; k < 1000; ++k) {
      Complex zeta = std::polar(std::exp(ur(rng)), ut(rng));
      worst = std::max(worst, std::abs(kt_inverse(kt_forward(zeta, nu), nu) - zeta));
    }
    bool corners = kt_forward({1.0, 0.0}, nu) == Complex(1.0, 0.0) &&
                   kt_forward({-1.0, 0.0}, nu) == Complex(-1.0, 0.0);
    c.require(corners, "f(+-1) = +-1 exactly (nu = " + Check::q(nu) + ")");
  }
  c.require(worst < 1e-10, "max roundtrip error " + Check::q(worst) + " < 1e-10");
  return c;
}

// 3. Bernoulli consistency in both forms; h_div strictly increasing.
Check suite_bernoulli(std::mt19937_64&) {
  Check c;
  double worst_speed = 0.0, worst_mom = 0.0;
  bool monotone = true;
  for (double gamma : {1.1, 1.4, 2.0}) {
    auto gas = GasModel::polytropic_stagnation_unit(gamma);
    double B = gas.bernoulli(), vl = gas.limit_speed(), ms = gas.sonic_momentum();
    for (int k = 0; k < 1700; ++k) {
      double q = vl * (k + 0.5) / 1701.0;
      double rho = gas.density_from_speed(q);
      worst_speed = std::max(worst_speed, std::abs(0.5 * q * q + gas.enthalpy(rho) - B) / B);
    }
    double prev = gas.h_div(0.0);
    for (int k = 1; k < 1700; ++k) {
      double m = ms * k / 1700.0;
      double h = gas.h_div(m);
      monotone = monotone && h > prev;
      prev = h;
      worst_mom = std::max(worst_mom, std::abs(m * h * h + gas.enthalpy(1.0 / h) - B) / B);
    }
  }
  c.require(worst_speed < 1e-10, "speed-form defect " + Check::q(worst_speed) + " < 1e-10");
  c.require(worst_mom < 1e-10, "momentum-form defect " + Check::q(worst_mom) + " < 1e-10");
  c.require(monotone, "h_div strictly increasing");
  return c;
}

// 4. Solver vs conformal oracle: circle convergence order; plate uniform stream.
Check suite_solver_circle(std::mt19937_64&) {
  Check c;
  KTProfile circle{1.0, {1.0, 0.0}, 1.0};
  double errs[2];
  int k = 0;
  for (int n : {64, 128}) {
    auto grid = build_grid(circle, 4.0, n, n, 1.0);
    SolveConfig cfg;
    cfg.gas = GasModel::incompressible(1.0);
    cfg.farfield = make_farfield(cfg.gas, 1.0, 1.0);
    cfg.tol = 1e-13;
    cfg.outer_dirichlet = [&](Complex z) { return z_potential(z, circle).imag(); };
    auto f = solve(cfg, grid);
    c.require(f.status == SolveStatus::converged, "circle solve converged at n=" + Check::q(n));
    double err = 0.0;
    for (int nn = 0; nn < grid.node_count(); ++nn)
      err = std::max(err, std::abs(f.psi[nn] - z_potential(grid.nodes[nn], circle).imag()));
    errs[k++] = err;
  }
  double order = std::log2(errs[0] / errs[1]);
  c.require(order >= 1.8, "L-inf(psi) order " + Check::q(order) + " >= 1.8");

  KTProfile plate{2.0, {1.0, 0.0}, 0.0};
  auto grid = build_grid(plate, 10.0, 16, 32, 1.05);
  SolveConfig cfg;
  cfg.gas = GasModel::incompressible(1.0);
  cfg.farfield = make_farfield(cfg.gas, plate.physical_speed(), 0.0);
  cfg.tol = 1e-13;
  auto f = solve(cfg, grid);
  double rho_v = cfg.farfield.rho_inf * cfg.farfield.v_inf;
  double err = 0.0;
  for (int n = 0; n < grid.node_count(); ++n)
    err = std::max(err, std::abs(f.psi[n] - rho_v * grid.nodes[n].imag()));
  c.require(err < 1e-10, "plate nodal max |psi - rho v y| = " + Check::q(err) + " < 1e-10");
  return c;
}

// 5. Corner singularity exponent of the nu = 1.5 lens at a generic circulation.
Check suite_corner_exponent(std::mt19937_64&) {
  Check c;
  Complex w = std::polar(1.0, 20.0 * kPi / 180.0);
  KTProfile p{1.5, w, 0.0};

  std::vector<double> radii(10);
  for (int k = 0; k < 10; ++k) radii[k] = 1e-3 * std::pow(1e-3, k / 9.0);
  auto rep = fit_corner_exponent(
      [&](double r) { return std::abs(z_velocity(Complex(1.0 + r, 0.0), p)); }, radii,
      Corner::trailing, 1.0 / 1.5 - 1.0);
  c.require(std::abs(rep.slope + 1.0 / 3.0) <= 0.02,
            "analytic slope " + Check::q(rep.slope) + " = -1/3 +- 0.02");

  auto grid = build_refined(p, 25.0, 36, 72, 1.12, 3);  // 288 x 576
  SolveConfig cfg;
  cfg.gas = GasModel::incompressible(1.0);
  cfg.farfield = make_farfield(cfg.gas, p.physical_speed(), p.gamma);
  cfg.tol = 1e-12;
  auto f = solve(cfg, grid);
  c.require(f.status == SolveStatus::converged, "lens solve converged");
  auto srep = solver_corner_exponent(grid, f, Corner::trailing, 1.5e-3, 0.15, 12, -1.0 / 3.0);
  c.require(std::abs(srep.slope + 1.0 / 3.0) <= 0.1,
            "solver slope " + Check::q(srep.slope) + " = -1/3 +- 0.1");
  return c;
}

// 6. Circulation extraction on |z| = 50 from analytic and solver fields.
Check suite_farfield_circulation(std::mt19937_64&) {
  Check c;
  double beta = 20.0 * kPi / 180.0;
  Complex w = std::polar(1.0, beta);
  double G = kutta_gamma(Corner::trailing, w);
  KTProfile lens{1.5, w, G};
  auto psi_at = [&](double x, double y) {
    Complex z_lens = Complex(x, y) * std::polar(1.0, -beta);
    return z_potential(z_lens, lens).imag();
  };
  auto base = make_farfield(GasModel::incompressible(1.0), lens.physical_speed(), 0.0);
  auto rep = extract_circulation(psi_at, 50.0, 64, base);
  c.require(std::abs(rep.gamma - G) <= 0.01 * std::abs(G),
            "analytic lens gamma " + Check::q(rep.gamma) + " within 1% of " + Check::q(G));

  KTProfile circle{1.0, {1.0, 0.0}, 1.0};
  auto grid = build_grid(circle, 70.0, 56, 96, 1.08);
  SolveConfig cfg;
  cfg.gas = GasModel::incompressible(1.0);
  cfg.farfield = make_farfield(cfg.gas, 1.0, 1.0);
  cfg.tol = 1e-12;
  auto f = solve(cfg, grid);
  c.require(f.status == SolveStatus::converged, "circle solve converged");
  auto srep = solver_field_circulation(grid, f, cfg.farfield, 50.0);
  c.require(std::abs(srep.gamma - 1.0) <= 0.01,
            "solver circle gamma " + Check::q(srep.gamma) + " within 1% of 1");
  return c;
}

// 7. Low-Mach limit: velocity distance to incompressible scales like M^2.
Check suite_low_mach(std::mt19937_64&) {
  Check c;
  KTProfile circle{1.0, {1.0, 0.0}, 1.0};
  auto grid = build_grid(circle, 15.0, 32, 48, 1.08);
  auto table = low_mach_study(circle, 1.4, {0.0, 0.1, 0.2}, grid, 1e-12);
  c.require(table.distance_at(0.0) == 0.0, "M = 0 row equals the incompressible solve");
  double ratio = table.distance_at(0.2) / table.distance_at(0.1);
  c.require(ratio >= 3.0 && ratio <= 5.0,
            "dist(0.2)/dist(0.1) = " + Check::q(ratio) + " in [3, 5]");
  return c;
}

// 8. Subsolution construction on random uniformly elliptic coefficients.
Check suite_subsolution(std::mt19937_64& rng) {
  Check c;
  std::uniform_real_distribution<double> ul(-1.0, 1.0), ur(1.0, 10.0), ua(0.0, 2.0 * kPi);
  std::uniform_real_distribution<double> uspan(kPi + 0.05, 2.0 * kPi);
  int failures = 0;
  double worst_lw = -1.0;
  for (int k = 0; k < 100; ++k) {
    double l1 = std::pow(10.0, ul(rng)), l2 = l1 / ur(rng), phi = ua(rng);
    double cs = std::cos(phi), sn = std::sin(phi);
    Mat2 A{cs * cs * l1 + sn * sn * l2, cs * sn * (l1 - l2), sn * sn * l1 + cs * cs * l2};
    auto coeff = [A](double, double) { return A; };
    double lo = ua(rng);
    try {
      auto sub = build_subsolution(lo, lo + uspan(rng), coeff, 1.0, 64);
      auto chk = verify_subsolution(sub, coeff, 64);
      if (!chk.passed) ++failures;
      worst_lw = std::max(worst_lw, chk.worst_lw);
      if (!(sub.amplitude >= 1.0)) ++failures;
    } catch (const std::exception&) {
      ++failures;
    }
  }
  c.require(failures == 0, "100 random elliptic A: all three clauses hold (failures " +
                               Check::q(failures) + ", worst scaled Lw " + Check::q(worst_lw) + ")");
  double zd = zero_distance(2.0);
  c.require(std::abs(zd - 2.0 * kPi / 3.0) < 1e-12,
            "a = 2 zero distance " + Check::q(zd) + " = 2 pi/3 to 1e-12");
  return c;
}

// 9. Non-existence evidence: plate growth, horizontal stabilization,
//    vertical-plate symmetry, circle negative control.
Check suite_nonexistence(std::mt19937_64&) {
  Check c;
  ProbeGridSpec spec;
  spec.R = 25.0;
  spec.nr = 16;
  spec.ntheta = 32;
  spec.stretch = 1.15;

  KTProfile angled{2.0, std::polar(0.5, kPi / 4.0), 0.0};
  auto rep = nonexistence_probe(angled, 0.0, {}, spec, 4, 1e-12);
  c.require(std::abs(rep.growth_exponent - 0.5) <= 0.1,
            "45-deg plate growth exponent " + Check::q(rep.growth_exponent) + " = 0.5 +- 0.1");

  KTProfile flat{2.0, {0.5, 0.0}, 0.0};
  auto rep2 = nonexistence_probe(flat, 0.0, {}, spec, 3, 1e-12);
  c.require(rep2.minimax_variation < 0.05, "horizontal plate minimax variation " +
                                               Check::q(rep2.minimax_variation) + " < 5%");

  KTProfile vertical{2.0, std::polar(0.5, kPi / 2.0), 0.0};
  auto grid = build_grid(vertical, 10.0, 24, 48, 1.05);
  SolveConfig cfg;
  cfg.gas = GasModel::incompressible(1.0);
  cfg.farfield = make_farfield(cfg.gas, vertical.physical_speed(), 0.0);
  cfg.tol = 1e-13;
  auto f = solve(cfg, grid);
  double scale = cfg.farfield.rho_inf * cfg.farfield.v_inf * 2.0;
  double worst = 0.0;
  for (int i = 0; i <= grid.nr; ++i)
    for (int j = 0; j < grid.ntheta; ++j) {
      int jm = grid.wrap(grid.ntheta / 2 - 1 - j);
      worst = std::max(worst,
                       std::abs(f.psi[grid.node_id(i, j)] + f.psi[grid.node_id(i, jm)]));
    }
  c.require(worst < 1e-8 * scale,
            "vertical plate symmetry residual " + Check::q(worst / scale) + " < 1e-8 (scaled)");

  KTProfile circle{1.0, {0.5, 0.0}, 0.0};
  auto rep3 = nonexistence_probe(circle, 0.0, {}, spec, 3, 1e-12);
  bool bounded = rep3.growth_exponent < 0.1;
  for (std::size_t k = 0; k < rep3.gamma_grid.size(); ++k) {
    double last = rep3.levels.back().corner_speed[k];
    double prev = rep3.levels[rep3.levels.size() - 2].corner_speed[k];
    bounded = bounded && last <= std::max(1.05 * prev, 1e-6);
  }
  c.require(bounded, "circle control bounded for every circulation (growth " +
                         Check::q(rep3.growth_exponent) + ")");
  return c;
}

// 10. Uniqueness evidence: one compressible flow per (v_inf, Gamma).
Check suite_uniqueness(std::mt19937_64&) {
  Check c;
  KTProfile p{1.0, {1.0, 0.0}, 1.0};
  auto grid = build_grid(p, 8.0, 24, 48, 1.05);
  SolveConfig cfg;
  cfg.gas = gas_for_mach(1.4, 0.25, p.physical_speed());
  cfg.farfield = make_farfield(cfg.gas, p.physical_speed(), p.gamma);
  cfg.tol = 1e-12;
  auto fa = solve(cfg, grid);
  c.require(fa.status == SolveStatus::converged, "expansion-initialized solve converged");

  SolveConfig cfg0;
  cfg0.gas = GasModel::incompressible(cfg.farfield.rho_inf);
  cfg0.farfield = make_farfield(cfg0.gas, p.physical_speed(), p.gamma);
  auto f0 = solve(cfg0, grid);
  std::vector<double> init = f0.psi;
  for (int n = 0; n < grid.node_count(); ++n) {
    double r = std::abs(grid.nodes[n]);
    init[n] *= 1.0 + 0.05 * std::exp(-0.5 * (r - 3.0) * (r - 3.0));
  }
  auto fb = solve(cfg, grid, &init);
  c.require(fb.status == SolveStatus::converged, "perturbation-initialized solve converged");

  double dmax = 0.0;
  for (int n = 0; n < grid.node_count(); ++n)
    dmax = std::max(dmax, std::abs(fa.psi[n] - fb.psi[n]));
  double scale = cfg.farfield.rho_inf * cfg.farfield.v_inf * 2.0;
  c.require(dmax <= 10.0 * cfg.tol * scale,
            "max nodal |psi_a - psi_b| = " + Check::q(dmax / scale) +
                " (scaled) <= 10 x tol = " + Check::q(10.0 * cfg.tol));
  return c;
}

struct SuiteEntry {
  const char* name;
  Check (*fn)(std::mt19937_64&);
  double runtime_limit;  // seconds
};

const SuiteEntry kSuites[] = {
    {"kutta-formulas", suite_kutta_formulas, 1.0},
    {"kt-roundtrip", suite_kt_roundtrip, 1.0},
    {"bernoulli-consistency", suite_bernoulli, 1.0},
    {"solver-circle-plate", suite_solver_circle, 60.0},
    {"corner-exponent-lens", suite_corner_exponent, 60.0},
    {"farfield-circulation", suite_farfield_circulation, 10.0},
    {"low-mach-limit", suite_low_mach, 120.0},
    {"subsolution", suite_subsolution, 5.0},
    {"nonexistence-evidence", suite_nonexistence, 300.0},
    {"uniqueness-evidence", suite_uniqueness, 60.0},
};

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : kSuites) v.push_back(s.name);
    return v;
  }();
  return names;
}

SuiteResult run_suite(const std::string& name, std::uint64_t seed) {
  for (const auto& entry : kSuites) {
    if (name != entry.name) continue;
    std::mt19937_64 rng(seed);
    auto t0 = std::chrono::steady_clock::now();
    Check c = entry.fn(rng);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_time = secs < entry.runtime_limit;
    std::string detail = c.detail.str();
    if (!in_time)
      detail += "; FAIL: runtime " + std::to_string(secs) + "s over the " +
                std::to_string(entry.runtime_limit) + "s limit";
    return {name, c.ok && in_time, detail, secs};
  }
  throw std::invalid_argument("unknown suite: " + name);
}

std::string format_suite_line(int index, const SuiteResult& r) {
  char head[64];
  std::snprintf(head, sizeof head, "[%s] %2d. %-24s (%.2fs) ", r.passed ? "PASS" : "FAIL", index,
                r.name.c_str(), r.seconds);
  return std::string(head) + r.detail;
}

}  // namespace cornerflow

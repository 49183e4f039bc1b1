#include "cornerflow/cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <numbers>

#include "CLI11.hpp"

#include "cornerflow/analysis.hpp"
#include "cornerflow/errors.hpp"
#include "cornerflow/output.hpp"
#include "cornerflow/runconfig.hpp"
#include "cornerflow/suites.hpp"

namespace cornerflow {

namespace {

namespace fs = std::filesystem;
constexpr double kPi = std::numbers::pi;

void apply_overrides(RunConfig& cfg, const std::string& out_dir, const std::string& format_list) {
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  if (!format_list.empty()) {
    cfg.formats.clear();
    std::string cur;
    for (char ch : format_list + ",") {
      if (ch == ',') {
        if (cur != "csv" && cur != "json" && cur != "svg")
          throw ConfigError("--format entries must be csv, json or svg");
        cfg.formats.push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
  }
}

std::vector<std::vector<Complex>> traced_streamlines(const RunConfig& cfg, double clip) {
  // analytic traces exist for the incompressible flow only
  std::vector<std::vector<Complex>> lines;
  if (!cfg.incompressible) return lines;
  KTProfile p = cfg.profile();
  Complex rot = std::polar(1.0, p.attack_angle());
  for (int k = 0; k < 15; ++k) {
    double y = -0.85 * clip + 1.7 * clip * k / 14.0;
    Complex seed_flow{-0.95 * clip, y};
    Complex seed_lens = seed_flow / rot;
    try {
      auto line = trace_streamline(seed_lens, p, 0.02, 6.0 * clip);
      for (auto& z : line) z *= rot;  // back to the flow-aligned frame
      lines.push_back(std::move(line));
    } catch (const std::domain_error&) {
    }
  }
  return lines;
}

int cmd_solve(const std::string& config_path, const std::string& out_dir,
              const std::string& formats) {
  RunConfig cfg = RunConfig::from_file(config_path);
  apply_overrides(cfg, out_dir, formats);
  auto grid = cfg.grid();
  auto field = solve(cfg.solve_config(), grid);

  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  nlohmann::json manifest = cfg.resolved();
  manifest["outcome"] = {{"status", field.status == SolveStatus::converged  ? "converged"
                                    : field.status == SolveStatus::supersonic ? "supersonic"
                                                                              : "max_iterations"},
                         {"iterations", field.iterations},
                         {"residual", field.residual},
                         {"max_mach", field.max_mach},
                         {"conservation_defect", field.conservation_defect}};
  if (field.status == SolveStatus::supersonic) {
    manifest["outcome"]["supersonic_at"] = {field.supersonic_at.real(),
                                            field.supersonic_at.imag()};
  }
  write_manifest(dir / "manifest.json", manifest);

  if (field.status != SolveStatus::supersonic) {
    if (cfg.wants("csv")) write_field_csv(dir / "field.csv", grid, field);
    if (cfg.wants("json")) write_convergence_jsonl(dir / "convergence.jsonl", field);
    if (cfg.wants("json")) {
      // circulation extracted from the far field, when the grid reaches far enough
      double outer_min = std::numeric_limits<double>::infinity();
      for (int j = 0; j < grid.ntheta; ++j)
        outer_min = std::min(outer_min, std::abs(grid.nodes[grid.node_id(grid.nr, j)]));
      try {
        auto rep = solver_field_circulation(grid, field, cfg.farfield(), 0.6 * outer_min);
        write_manifest(dir / "fit_report.json",
                       nlohmann::json{{"gamma", rep.gamma},
                                      {"psi_const", rep.psi_const},
                                      {"residual_rms", rep.residual_rms},
                                      {"ring_radius", rep.ring_radius}});
      } catch (const std::exception&) {
        // too small a domain or a level-set-degenerate sampling; skip the report
      }
    }
    if (cfg.wants("svg")) {
      SvgOptions opt;
      opt.color_by_mach = !cfg.incompressible;
      auto lines = traced_streamlines(cfg, opt.clip_radius);
      write_field_svg(dir / "field.svg", grid, field, opt, lines);
      if (cfg.wants("csv") && !lines.empty())
        write_streamlines_csv(dir / "streamlines.csv", lines);
    }
  }

  switch (field.status) {
    case SolveStatus::converged: return 0;
    case SolveStatus::supersonic: return 2;
    case SolveStatus::max_iterations: return 3;
  }
  return 3;
}

int cmd_kutta(double nu, double angle_deg, double w_mag) {
  Complex w = std::polar(w_mag, angle_deg * kPi / 180.0);
  auto kg = kutta_incompatibility(w);
  std::printf("nu                 %.12g\n", nu);
  std::printf("attack_angle_deg   %.12g\n", angle_deg);
  std::printf("w_inf_mag          %.12g\n", w_mag);
  std::printf("v_inf (physical)   %.12g\n", nu * w_mag);
  std::printf("gamma_trailing     %.12g\n", kg.gamma_trailing);
  std::printf("gamma_leading      %.12g\n", kg.gamma_leading);
  std::printf("gap                %.12g\n", kg.gap);
  return 0;
}

int cmd_verify(const std::string& suite, std::uint64_t seed) {
  SuiteResult r = run_suite(suite, seed);
  std::printf("%s\n", format_suite_line(1, r).c_str());
  return r.passed ? 0 : 2;
}

int cmd_sweep(const std::string& config_path, const std::string& out_dir) {
  RunConfig cfg = RunConfig::from_file(config_path);
  apply_overrides(cfg, out_dir, "");
  if (cfg.sweep_kind.empty()) throw ConfigError("sweep: config needs a sweep section");
  fs::path dir(cfg.out_dir);
  fs::create_directories(dir);
  nlohmann::json manifest = cfg.resolved();

  if (cfg.sweep_kind == "nonexistence") {
    ProbeGridSpec spec;
    spec.R = cfg.grid_R;
    spec.nr = cfg.grid_nr;
    spec.ntheta = cfg.grid_ntheta;
    spec.stretch = cfg.grid_stretch;
    auto gammas = default_gamma_grid(cfg.profile().w_inf, cfg.sweep_gamma_points);
    auto rep = nonexistence_probe(cfg.profile(), cfg.incompressible ? 0.0 : cfg.mach_inf, gammas,
                                  spec, cfg.sweep_levels, cfg.solver_tol);

    std::FILE* f = std::fopen((dir / "sweep_speeds.csv").string().c_str(), "w");
    if (!f) throw ConfigError("sweep: cannot open output");
    std::fprintf(f, "level,nr,ntheta,gamma,corner_speed\n");
    for (std::size_t l = 0; l < rep.levels.size(); ++l)
      for (std::size_t k = 0; k < rep.gamma_grid.size(); ++k)
        std::fprintf(f, "%zu,%d,%d,%.17g,%.17g\n", l, rep.levels[l].nr, rep.levels[l].ntheta,
                     rep.gamma_grid[k], rep.levels[l].corner_speed[k]);
    std::fclose(f);

    f = std::fopen((dir / "sweep_minimax.csv").string().c_str(), "w");
    std::fprintf(f, "level,nr,ntheta,probe_distance,minimax,gamma_at_min\n");
    for (std::size_t l = 0; l < rep.levels.size(); ++l)
      std::fprintf(f, "%zu,%d,%d,%.17g,%.17g,%.17g\n", l, rep.levels[l].nr, rep.levels[l].ntheta,
                   rep.levels[l].probe_distance, rep.levels[l].minimax,
                   rep.levels[l].gamma_at_min);
    std::fclose(f);

    manifest["report"] = {{"growth_exponent", rep.growth_exponent},
                          {"minimax_variation", rep.minimax_variation}};
    std::printf("nonexistence sweep: growth exponent %.4f, last-level variation %.4f\n",
                rep.growth_exponent, rep.minimax_variation);
  } else {
    auto grid = cfg.grid();
    auto table = low_mach_study(cfg.profile(), cfg.gas_gamma, cfg.sweep_machs, grid, cfg.solver_tol);
    std::FILE* f = std::fopen((dir / "low_mach.csv").string().c_str(), "w");
    if (!f) throw ConfigError("sweep: cannot open output");
    std::fprintf(f, "mach,status,distance\n");
    for (const auto& row : table.rows)
      std::fprintf(f, "%.17g,%s,%.17g\n", row.mach,
                   row.status == SolveStatus::converged ? "converged" : "failed", row.distance);
    std::fclose(f);
    std::printf("low-mach sweep: %zu entries written\n", table.rows.size());
  }
  write_manifest(dir / "manifest.json", manifest);
  return 0;
}

int cmd_grid(const std::string& config_path, const std::string& out_dir) {
  RunConfig cfg = RunConfig::from_file(config_path);
  apply_overrides(cfg, out_dir, "");
  auto grid = cfg.grid();
  fs::path dir(cfg.out_dir);
  write_grid_csv(dir / "grid.csv", grid);
  write_manifest(dir / "manifest.json", cfg.resolved());
  std::printf("grid: %d x %d nodes written\n", grid.nr + 1, grid.ntheta);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"cornerflow: subsonic irrotational flow around bodies with protruding corners"};
  app.require_subcommand(1);

  std::string config_path, out_dir, formats, suite;
  std::uint64_t seed = 12345;
  double nu = 2.0, angle_deg = 0.0, w_mag = 1.0;

  auto* solve_cmd = app.add_subcommand("solve", "solve a flow described by a JSON config");
  solve_cmd->add_option("--config", config_path, "config path")->required();
  solve_cmd->add_option("--out", out_dir, "output directory override");
  solve_cmd->add_option("--format", formats, "comma-separated: csv,json,svg");

  auto* kutta_cmd = app.add_subcommand("kutta", "print the two Kutta circulations and their gap");
  kutta_cmd->add_option("--nu", nu, "corner angle exponent");
  kutta_cmd->add_option("--angle-deg", angle_deg, "attack angle in degrees")->required();
  kutta_cmd->add_option("--w-mag", w_mag, "circle-plane free stream magnitude");

  auto* verify_cmd = app.add_subcommand("verify", "run a named verification suite");
  verify_cmd->add_option("suite", suite, "suite name")->required();
  verify_cmd->add_option("--seed", seed, "seed for randomized checks");

  auto* sweep_cmd = app.add_subcommand("sweep", "run a nonexistence or low-mach sweep");
  sweep_cmd->add_option("--config", config_path, "config path")->required();
  sweep_cmd->add_option("--out", out_dir, "output directory override");

  auto* grid_cmd = app.add_subcommand("grid", "dump the grid nodes of a config");
  grid_cmd->add_option("--config", config_path, "config path")->required();
  grid_cmd->add_option("--out", out_dir, "output directory override");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) return cmd_solve(config_path, out_dir, formats);
    if (kutta_cmd->parsed()) return cmd_kutta(nu, angle_deg, w_mag);
    if (verify_cmd->parsed()) return cmd_verify(suite, seed);
    if (sweep_cmd->parsed()) return cmd_sweep(config_path, out_dir);
    if (grid_cmd->parsed()) return cmd_grid(config_path, out_dir);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace cornerflow

#include "cornerflow/cli_app.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "cornerflow/errors.hpp"
#include "cornerflow/output.hpp"
#include "cornerflow/runconfig.hpp"
#include "cornerflow/suites.hpp"
#include "doctest.h"

using namespace cornerflow;
namespace fs = std::filesystem;

namespace {

fs::path tmpdir() {
  auto d = fs::temp_directory_path() / "cornerflow_test";
  fs::create_directories(d);
  return d;
}

fs::path write_config(const std::string& name, const std::string& body) {
  auto p = tmpdir() / name;
  std::ofstream(p) << body;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const char* kPlateConfig = R"({
  "profile": {"nu": 2.0, "attack_angle_deg": 0.0, "w_inf_mag": 1.0},
  "gas": {"incompressible": true},
  "circulation": 0.0,
  "grid": {"R": 8.0, "Nr": 8, "Ntheta": 16, "stretch": 1.0},
  "solver": {"tol": 1e-12, "max_iter": 50, "damping": 0.7, "scheme": "picard"},
  "outputs": {"dir": "OUTDIR", "formats": ["csv", "json", "svg"]}
})";

std::string plate_config_with_dir(const fs::path& dir) {
  std::string s = kPlateConfig;
  return s.replace(s.find("OUTDIR"), 6, dir.generic_string());
}

}  // namespace

TEST_CASE("RunConfig: parsing, defaults, rejection of unknown keys") {
  auto j = nlohmann::json::parse(R"({
    "profile": {"nu": 1.5, "attack_angle_deg": 20.0, "w_inf_mag": 1.0},
    "gas": {"gamma": 1.4, "mach_inf": 0.3},
    "circulation": "kutta_trailing",
    "grid": {"R": 25.0, "Nr": 16, "Ntheta": 32, "stretch": 1.1}
  })");
  auto cfg = RunConfig::from_json(j);
  CHECK_FALSE(cfg.incompressible);
  CHECK(cfg.mach_inf == 0.3);
  CHECK(cfg.kutta_corner == 0);
  auto p = cfg.profile();
  CHECK(p.gamma == doctest::Approx(kutta_gamma(Corner::trailing, p.w_inf)).epsilon(1e-14));
  CHECK(cfg.solve_config().farfield.mach_inf == doctest::Approx(0.3).epsilon(1e-12));

  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"profil": {}})")), ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json(nlohmann::json::parse(R"({"profile": {"nu": 1.5, "typo": 1}})")),
      ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"gas": {"mach_inf": 1.2}})")),
                  ConfigError);
  CHECK_THROWS_AS(RunConfig::from_json(nlohmann::json::parse(R"({"circulation": "kutta_both"})")),
                  ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json(nlohmann::json::parse(R"({"outputs": {"formats": ["pdf"]}})")),
      ConfigError);
  CHECK_THROWS_AS(
      RunConfig::from_json(nlohmann::json::parse(
          R"({"gas": {"incompressible": true, "mach_inf": 0.3}})")),
      ConfigError);
}

TEST_CASE("cli: solve exit codes and deterministic outputs") {
  auto out1 = tmpdir() / "run1";
  auto out2 = tmpdir() / "run2";
  fs::remove_all(out1);
  fs::remove_all(out2);
  auto cfgpath = write_config("plate.json", plate_config_with_dir(out1));

  CHECK(run_cli({"solve", "--config", cfgpath.string()}) == 0);
  CHECK(fs::exists(out1 / "manifest.json"));
  CHECK(fs::exists(out1 / "field.csv"));
  CHECK(fs::exists(out1 / "convergence.jsonl"));
  CHECK(fs::exists(out1 / "field.svg"));
  CHECK(fs::exists(out1 / "streamlines.csv"));

  // field header is frozen
  std::ifstream field(out1 / "field.csv");
  std::string header;
  std::getline(field, header);
  CHECK(header == "x,y,psi,vx,vy,rho,mach");

  // identical config, second directory: byte-identical field output
  CHECK(run_cli({"solve", "--config", cfgpath.string(), "--out", out2.string()}) == 0);
  CHECK(slurp(out1 / "field.csv") == slurp(out2 / "field.csv"));
  CHECK(slurp(out1 / "field.svg") == slurp(out2 / "field.svg"));

  // manifest echoes the resolved config
  auto manifest = nlohmann::json::parse(slurp(out1 / "manifest.json"));
  CHECK(manifest["profile"]["nu"] == 2.0);
  CHECK(manifest["outcome"]["status"] == "converged");

  // malformed json and bad schema exit 1
  auto bad = write_config("bad.json", "{ not json");
  CHECK(run_cli({"solve", "--config", bad.string()}) == 1);
  auto unknown = write_config("unknown.json", R"({"nonsense": 1})");
  CHECK(run_cli({"solve", "--config", unknown.string()}) == 1);
  CHECK(run_cli({"solve", "--config", "/nonexistent/path.json"}) == 1);

  // supersonic abort maps to exit 2 (fast free stream past a circle)
  auto super = write_config("super.json", R"({
    "profile": {"nu": 1.0, "attack_angle_deg": 0.0, "w_inf_mag": 1.0},
    "gas": {"gamma": 1.4, "mach_inf": 0.85},
    "circulation": 0.0,
    "grid": {"R": 6.0, "Nr": 8, "Ntheta": 16, "stretch": 1.0},
    "outputs": {"dir": ")" + (tmpdir() / "super_out").generic_string() + R"(", "formats": ["json"]}
  })");
  CHECK(run_cli({"solve", "--config", super.string()}) == 2);
  CHECK(fs::exists(tmpdir() / "super_out" / "manifest.json"));

  // non-convergence maps to exit 3
  auto stall = write_config("stall.json", R"({
    "profile": {"nu": 1.0, "attack_angle_deg": 0.0, "w_inf_mag": 1.0},
    "gas": {"gamma": 1.4, "mach_inf": 0.3},
    "circulation": 0.0,
    "grid": {"R": 6.0, "Nr": 8, "Ntheta": 16, "stretch": 1.0},
    "solver": {"tol": 1e-14, "max_iter": 2},
    "outputs": {"dir": ")" + (tmpdir() / "stall_out").generic_string() + R"(", "formats": ["json"]}
  })");
  CHECK(run_cli({"solve", "--config", stall.string()}) == 3);
}

TEST_CASE("cli: kutta, grid, verify and sweep commands") {
  CHECK(run_cli({"kutta", "--angle-deg", "30", "--w-mag", "1.0"}) == 0);

  auto gdir = tmpdir() / "grid_out";
  fs::remove_all(gdir);
  auto cfgpath = write_config("plate2.json", plate_config_with_dir(gdir));
  CHECK(run_cli({"grid", "--config", cfgpath.string()}) == 0);
  CHECK(fs::exists(gdir / "grid.csv"));

  // unknown verify suite exits 1
  CHECK(run_cli({"verify", "no-such-suite"}) == 1);
  // a quick real suite passes
  CHECK(run_cli({"verify", "kutta-formulas"}) == 0);
  CHECK(run_cli({"verify", "kt-roundtrip", "--seed", "777"}) == 0);

  auto sdir = tmpdir() / "sweep_out";
  fs::remove_all(sdir);
  auto sweepcfg = write_config("sweep.json", R"({
    "profile": {"nu": 2.0, "attack_angle_deg": 45.0, "w_inf_mag": 0.5},
    "gas": {"incompressible": true},
    "grid": {"R": 20.0, "Nr": 8, "Ntheta": 16, "stretch": 1.2},
    "sweep": {"kind": "nonexistence", "levels": 2, "gamma_points": 5},
    "outputs": {"dir": ")" + sdir.generic_string() + R"(", "formats": ["csv", "json"]}
  })");
  CHECK(run_cli({"sweep", "--config", sweepcfg.string()}) == 0);
  CHECK(fs::exists(sdir / "sweep_minimax.csv"));
  CHECK(fs::exists(sdir / "sweep_speeds.csv"));
  CHECK(fs::exists(sdir / "manifest.json"));
}

TEST_CASE("suite registry") {
  CHECK(suite_names().size() == 10);
  CHECK(suite_names().front() == "kutta-formulas");
  CHECK_THROWS_AS(run_suite("bogus"), std::invalid_argument);
}

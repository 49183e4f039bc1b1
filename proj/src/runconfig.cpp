#include "cornerflow/runconfig.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>

#include "cornerflow/errors.hpp"

namespace cornerflow {

namespace {

using nlohmann::json;

void check_keys(const json& j, std::initializer_list<const char*> allowed,
                const std::string& ctx) {
  if (!j.is_object()) throw ConfigError("config: '" + ctx + "' must be an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (std::find_if(allowed.begin(), allowed.end(),
                     [&](const char* k) { return it.key() == k; }) == allowed.end())
      throw ConfigError("config: unknown key '" + it.key() + "' in '" + ctx + "'");
  }
}

double num(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number()) throw ConfigError(std::string("config: '") + key + "' must be a number");
  return j[key].get<double>();
}

int integer(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  if (!j[key].is_number_integer())
    throw ConfigError(std::string("config: '") + key + "' must be an integer");
  return j[key].get<int>();
}

}  // namespace

RunConfig RunConfig::from_json(const json& j) {
  check_keys(j, {"profile", "gas", "circulation", "grid", "solver", "outputs", "sweep"}, "root");
  RunConfig c;

  if (j.contains("profile")) {
    const auto& p = j["profile"];
    check_keys(p, {"nu", "attack_angle_deg", "w_inf_mag"}, "profile");
    c.nu = num(p, "nu", c.nu);
    c.attack_angle_deg = num(p, "attack_angle_deg", c.attack_angle_deg);
    c.w_inf_mag = num(p, "w_inf_mag", c.w_inf_mag);
    if (!(c.nu >= 1.0 && c.nu <= 2.0)) throw ConfigError("config: profile.nu must lie in [1, 2]");
    if (!(c.w_inf_mag >= 0.0)) throw ConfigError("config: profile.w_inf_mag must be >= 0");
  }

  if (j.contains("gas")) {
    const auto& g = j["gas"];
    check_keys(g, {"gamma", "mach_inf", "bernoulli", "incompressible"}, "gas");
    c.gas_gamma = num(g, "gamma", c.gas_gamma);
    if (g.contains("incompressible")) {
      if (!g["incompressible"].is_boolean())
        throw ConfigError("config: gas.incompressible must be a boolean");
      c.incompressible = g["incompressible"].get<bool>();
      if (c.incompressible && (g.contains("mach_inf") || g.contains("bernoulli")))
        throw ConfigError("config: gas.mach_inf/bernoulli conflict with incompressible mode");
    }
    if (g.contains("mach_inf") && g.contains("bernoulli"))
      throw ConfigError("config: give gas.mach_inf or gas.bernoulli, not both");
    if (g.contains("mach_inf")) {
      c.mach_inf = num(g, "mach_inf", 0.0);
      c.incompressible = false;
      if (!(c.mach_inf > 0.0 && c.mach_inf < 1.0))
        throw ConfigError("config: gas.mach_inf must lie in (0, 1)");
    }
    if (g.contains("bernoulli")) {
      c.bernoulli = num(g, "bernoulli", 0.0);
      c.incompressible = false;
      if (!(c.bernoulli > 0.0)) throw ConfigError("config: gas.bernoulli must be positive");
    }
    if (!c.incompressible && !g.contains("mach_inf") && !g.contains("bernoulli"))
      throw ConfigError("config: gas needs mach_inf, bernoulli or incompressible=true");
  }

  if (j.contains("circulation")) {
    const auto& circ = j["circulation"];
    if (circ.is_number()) {
      c.circulation_value = circ.get<double>();
    } else if (circ.is_string()) {
      std::string s = circ.get<std::string>();
      if (s == "kutta_trailing") c.kutta_corner = 0;
      else if (s == "kutta_leading") c.kutta_corner = 1;
      else throw ConfigError("config: circulation string must be kutta_trailing or kutta_leading");
    } else {
      throw ConfigError("config: circulation must be a number or a kutta_* string");
    }
  }

  if (j.contains("grid")) {
    const auto& g = j["grid"];
    check_keys(g, {"R", "Nr", "Ntheta", "stretch"}, "grid");
    c.grid_R = num(g, "R", c.grid_R);
    c.grid_nr = integer(g, "Nr", c.grid_nr);
    c.grid_ntheta = integer(g, "Ntheta", c.grid_ntheta);
    c.grid_stretch = num(g, "stretch", c.grid_stretch);
  }

  if (j.contains("solver")) {
    const auto& s = j["solver"];
    check_keys(s, {"tol", "max_iter", "damping", "scheme"}, "solver");
    c.solver_tol = num(s, "tol", c.solver_tol);
    c.solver_max_iter = integer(s, "max_iter", c.solver_max_iter);
    c.solver_damping = num(s, "damping", c.solver_damping);
    if (s.contains("scheme")) {
      std::string sc = s["scheme"].get<std::string>();
      if (sc == "picard") c.scheme = Scheme::picard;
      else if (sc == "newton") c.scheme = Scheme::newton;
      else throw ConfigError("config: solver.scheme must be picard or newton");
    }
  }

  if (j.contains("outputs")) {
    const auto& o = j["outputs"];
    check_keys(o, {"dir", "formats"}, "outputs");
    if (o.contains("dir")) c.out_dir = o["dir"].get<std::string>();
    if (o.contains("formats")) {
      c.formats.clear();
      for (const auto& f : o["formats"]) {
        std::string s = f.get<std::string>();
        if (s != "csv" && s != "json" && s != "svg")
          throw ConfigError("config: outputs.formats entries must be csv, json or svg");
        c.formats.push_back(s);
      }
    }
  }

  if (j.contains("sweep")) {
    const auto& s = j["sweep"];
    check_keys(s, {"kind", "levels", "gamma_points", "machs"}, "sweep");
    c.sweep_kind = s.contains("kind") ? s["kind"].get<std::string>() : "";
    if (c.sweep_kind != "nonexistence" && c.sweep_kind != "low_mach")
      throw ConfigError("config: sweep.kind must be nonexistence or low_mach");
    c.sweep_levels = integer(s, "levels", c.sweep_levels);
    c.sweep_gamma_points = integer(s, "gamma_points", c.sweep_gamma_points);
    if (s.contains("machs")) {
      c.sweep_machs.clear();
      for (const auto& m : s["machs"]) c.sweep_machs.push_back(m.get<double>());
    }
  }
  return c;
}

RunConfig RunConfig::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: JSON parse error: ") + e.what());
  }
  return from_json(j);
}

KTProfile RunConfig::profile() const {
  Complex w = std::polar(w_inf_mag, attack_angle_deg * std::numbers::pi / 180.0);
  double gamma = circulation_value;
  if (kutta_corner == 0) gamma = kutta_gamma(Corner::trailing, w);
  if (kutta_corner == 1) gamma = kutta_gamma(Corner::leading, w);
  return KTProfile::from_circle_freestream(nu, w, gamma);
}

GasModel RunConfig::gas() const {
  if (incompressible) return GasModel::incompressible(1.0);
  if (bernoulli > 0.0) return GasModel::polytropic(gas_gamma, bernoulli);
  return gas_for_mach(gas_gamma, mach_inf, profile().physical_speed());
}

FarFieldState RunConfig::farfield() const {
  auto p = profile();
  return make_farfield(gas(), p.physical_speed(), p.gamma);
}

ExteriorGrid RunConfig::grid() const {
  return build_grid(profile(), grid_R, grid_nr, grid_ntheta, grid_stretch);
}

SolveConfig RunConfig::solve_config() const {
  SolveConfig cfg;
  cfg.gas = gas();
  cfg.farfield = farfield();
  cfg.tol = solver_tol;
  cfg.max_iter = solver_max_iter;
  cfg.damping = solver_damping;
  cfg.scheme = scheme;
  return cfg;
}

bool RunConfig::wants(const std::string& format) const {
  return std::find(formats.begin(), formats.end(), format) != formats.end();
}

nlohmann::json RunConfig::resolved() const {
  auto p = profile();
  nlohmann::json j;
  j["profile"] = {{"nu", nu}, {"attack_angle_deg", attack_angle_deg}, {"w_inf_mag", w_inf_mag}};
  j["gas"] = incompressible ? nlohmann::json{{"incompressible", true}}
             : bernoulli > 0.0
                 ? nlohmann::json{{"gamma", gas_gamma}, {"bernoulli", bernoulli}}
                 : nlohmann::json{{"gamma", gas_gamma}, {"mach_inf", mach_inf}};
  if (!incompressible) j["gas"]["mach_inf_resolved"] = farfield().mach_inf;
  j["circulation"] = {{"value", p.gamma},
                      {"rule", kutta_corner == 0   ? "kutta_trailing"
                               : kutta_corner == 1 ? "kutta_leading"
                                                   : "explicit"}};
  j["grid"] = {{"R", grid_R}, {"Nr", grid_nr}, {"Ntheta", grid_ntheta}, {"stretch", grid_stretch}};
  j["solver"] = {{"tol", solver_tol},
                 {"max_iter", solver_max_iter},
                 {"damping", solver_damping},
                 {"scheme", scheme == Scheme::picard ? "picard" : "newton"}};
  j["outputs"] = {{"dir", out_dir}, {"formats", formats}};
  j["physical"] = {{"v_inf", p.physical_speed()},
                   {"attack_angle_rad", p.attack_angle()},
                   {"nondimensional_circulation", p.physical_speed() > 0.0
                                                      ? p.gamma / (p.physical_speed() * 2.0)
                                                      : 0.0}};
  if (!sweep_kind.empty()) {
    j["sweep"] = {{"kind", sweep_kind},
                  {"levels", sweep_levels},
                  {"gamma_points", sweep_gamma_points},
                  {"machs", sweep_machs}};
  }
  return j;
}

}  // namespace cornerflow

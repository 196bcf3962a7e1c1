#include "homog/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "homog/degradation.hpp"
#include "homog/errors.hpp"

namespace homog {

namespace {

using nlohmann::json;

/// Collects schema violations so a bad config reports everything at once.
struct Checker {
  std::vector<std::string> errors;

  void add(const std::string& path, const std::string& msg) {
    errors.push_back(path.empty() ? msg : path + ": " + msg);
  }

  void finish(const std::string& file) const {
    if (errors.empty()) return;
    std::ostringstream os;
    os << file << ": " << errors.size() << " config error(s):";
    for (const auto& e : errors) os << "\n  - " << e;
    throw ConfigError(os.str());
  }
};

struct Node {
  const json* j;
  std::string path;
  Checker* check;

  bool ok() const { return j != nullptr; }

  void expect_keys(const std::set<std::string>& allowed,
                   const std::set<std::string>& required) const {
    if (!ok()) return;
    if (!j->is_object()) {
      check->add(path, "expected an object");
      return;
    }
    for (const auto& [key, value] : j->items())
      if (!allowed.count(key)) check->add(path, "unknown key '" + key + "'");
    for (const auto& key : required)
      if (!j->contains(key)) check->add(path, "missing required key '" + key + "'");
  }

  Node child(const std::string& key) const {
    if (!ok() || !j->is_object() || !j->contains(key))
      return {nullptr, path + "." + key, check};
    return {&(*j)[key], path.empty() ? key : path + "." + key, check};
  }

  Node element(std::size_t i) const {
    if (!ok() || !j->is_array() || i >= j->size())
      return {nullptr, path + "[" + std::to_string(i) + "]", check};
    return {&(*j)[i], path + "[" + std::to_string(i) + "]", check};
  }

  std::size_t array_size() const {
    return ok() && j->is_array() ? j->size() : 0;
  }

  bool is_array() const { return ok() && j->is_array(); }

  double number(double fallback) const {
    if (!ok()) return fallback;
    if (!j->is_number()) {
      check->add(path, "expected a number");
      return fallback;
    }
    return j->get<double>();
  }

  int integer(int fallback) const {
    if (!ok()) return fallback;
    if (!j->is_number_integer()) {
      check->add(path, "expected an integer");
      return fallback;
    }
    return j->get<int>();
  }

  bool boolean(bool fallback) const {
    if (!ok()) return fallback;
    if (!j->is_boolean()) {
      check->add(path, "expected a boolean");
      return fallback;
    }
    return j->get<bool>();
  }

  std::string text(const std::string& fallback) const {
    if (!ok()) return fallback;
    if (!j->is_string()) {
      check->add(path, "expected a string");
      return fallback;
    }
    return j->get<std::string>();
  }

  Eigen::Vector3d vec3(const Eigen::Vector3d& fallback) const {
    if (!ok()) return fallback;
    if (!j->is_array() || j->size() != 3 || !(*j)[0].is_number() ||
        !(*j)[1].is_number() || !(*j)[2].is_number()) {
      check->add(path, "expected an array of 3 numbers");
      return fallback;
    }
    return {(*j)[0].get<double>(), (*j)[1].get<double>(), (*j)[2].get<double>()};
  }
};

json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
  return j;
}

BcKind parse_bc(const Node& n, BcKind fallback) {
  if (!n.ok()) return fallback;
  const std::string s = n.text(to_string(fallback));
  try {
    return bc_kind_from_string(s);
  } catch (const ConfigError& e) {
    n.check->add(n.path, e.what());
    return fallback;
  }
}

std::vector<FixedValueBc> parse_fixed_values(const Node& n) {
  std::vector<FixedValueBc> out;
  if (!n.ok()) return out;
  if (!n.is_array()) {
    n.check->add(n.path, "expected an array");
    return out;
  }
  for (std::size_t i = 0; i < n.array_size(); ++i) {
    Node e = n.element(i);
    e.expect_keys({"set", "value"}, {"set", "value"});
    out.push_back({e.child("set").text(""), e.child("value").number(0.0)});
  }
  return out;
}

std::vector<SurfaceFluxBc> parse_fluxes(const Node& n) {
  std::vector<SurfaceFluxBc> out;
  if (!n.ok()) return out;
  if (!n.is_array()) {
    n.check->add(n.path, "expected an array");
    return out;
  }
  for (std::size_t i = 0; i < n.array_size(); ++i) {
    Node e = n.element(i);
    e.expect_keys({"set", "value"}, {"set", "value"});
    out.push_back({e.child("set").text(""), e.child("value").number(0.0)});
  }
  return out;
}

std::vector<Probe> parse_probes(const Node& n) {
  std::vector<Probe> out;
  if (!n.ok()) return out;
  if (!n.is_array()) {
    n.check->add(n.path, "expected an array");
    return out;
  }
  for (std::size_t i = 0; i < n.array_size(); ++i) {
    Node e = n.element(i);
    e.expect_keys({"name", "point"}, {"name", "point"});
    out.push_back({e.child("name").text("probe" + std::to_string(i)),
                   e.child("point").vec3(Eigen::Vector3d::Zero())});
  }
  return out;
}

PhaseMaterialConfig parse_phase(const Node& n) {
  PhaseMaterialConfig p;
  n.expect_keys({"tag", "name", "is_matrix", "elastic", "axis", "flow",
                 "thermal_conductivity", "rho_cp", "moisture_diffusivity"},
                {"tag"});
  p.tag = n.child("tag").integer(0);
  p.name = n.child("name").text("");
  p.is_matrix = n.child("is_matrix").boolean(false);

  Node el = n.child("elastic");
  if (el.ok()) {
    const std::string type = el.child("type").text("");
    if (type == "isotropic") {
      el.expect_keys({"type", "E", "nu"}, {"type", "E", "nu"});
      p.isotropic = IsotropicElastic{el.child("E").number(0.0),
                                     el.child("nu").number(0.0)};
    } else if (type == "transversely_isotropic") {
      el.expect_keys({"type", "Ep", "Ez", "nup", "nuz", "Gpz"},
                     {"type", "Ep", "Ez", "nup", "nuz", "Gpz"});
      p.transversely_isotropic = TransverselyIsotropic{
          el.child("Ep").number(0.0), el.child("Ez").number(0.0),
          el.child("nup").number(0.0), el.child("nuz").number(0.0),
          el.child("Gpz").number(0.0)};
    } else {
      el.check->add(el.path,
                    "elastic.type must be isotropic|transversely_isotropic");
    }
  }
  Node ax = n.child("axis");
  if (ax.ok()) p.axis = ax.vec3(Eigen::Vector3d::UnitZ());
  Node fl = n.child("flow");
  if (fl.ok()) {
    fl.expect_keys({"inlet", "outlet"}, {"inlet", "outlet"});
    p.flow = PhaseMaterialConfig::FlowSpec{fl.child("inlet").text(""),
                                           fl.child("outlet").text("")};
  }
  Node tc = n.child("thermal_conductivity");
  if (tc.ok()) p.thermal_conductivity = tc.number(0.0);
  Node rc = n.child("rho_cp");
  if (rc.ok()) p.rho_cp = rc.number(0.0);
  Node md = n.child("moisture_diffusivity");
  if (md.ok()) p.moisture_diffusivity = md.number(0.0);
  return p;
}

std::vector<PhaseMaterialConfig> parse_phases(const Node& n) {
  std::vector<PhaseMaterialConfig> out;
  if (!n.ok()) return out;
  if (!n.is_array()) {
    n.check->add(n.path, "expected an array of phase objects");
    return out;
  }
  for (std::size_t i = 0; i < n.array_size(); ++i)
    out.push_back(parse_phase(n.element(i)));
  return out;
}

void require_positive(const Node& root, const std::string& what, double v,
                      Checker& check) {
  if (!(v > 0.0))
    check.add(root.path, what + " must be positive (got " +
                             std::to_string(v) + ")");
}

} // namespace

HomogenizeConfig parse_homogenize_config(const std::string& path) {
  const json j = load_json(path);
  Checker check;
  Node root{&j, "", &check};
  root.expect_keys({"mesh", "order", "bc", "physics", "phases",
                    "one_minus_omega", "report", "vtk"},
                   {"mesh", "phases"});
  HomogenizeConfig cfg;
  cfg.mesh = root.child("mesh").text("");
  cfg.order = root.child("order").integer(2);
  cfg.bc = parse_bc(root.child("bc"), BcKind::Periodic);
  cfg.physics = root.child("physics").text("mech");
  cfg.phases = parse_phases(root.child("phases"));
  cfg.one_minus_omega = root.child("one_minus_omega").number(1.0);
  cfg.report_path = root.child("report").text("");
  cfg.vtk_path = root.child("vtk").text("");

  if (cfg.order != 1 && cfg.order != 2)
    check.add("order", "must be 1 or 2");
  if (cfg.physics != "mech" && cfg.physics != "thermal" &&
      cfg.physics != "moisture")
    check.add("physics", "must be mech|thermal|moisture");
  if (!(cfg.one_minus_omega > 0.0 && cfg.one_minus_omega <= 1.0))
    check.add("one_minus_omega", "must lie in (0, 1]");
  check.finish(path);
  return cfg;
}

TransientCliConfig parse_transient_config(const std::string& path) {
  const json j = load_json(path);
  Checker check;
  Node root{&j, "", &check};
  root.expect_keys({"mesh", "order", "physics", "conductivity", "rho_cp",
                    "initial_value", "fixed_values", "fluxes", "dt", "t_end",
                    "snapshot_stride", "probes", "output_dir",
                    "steady_rel_tol", "stop_at_steady"},
                   {"mesh", "conductivity", "dt", "t_end"});
  TransientCliConfig cfg;
  cfg.mesh = root.child("mesh").text("");
  cfg.order = root.child("order").integer(1);
  cfg.physics = root.child("physics").text("thermal");
  Node k = root.child("conductivity");
  if (k.ok()) {
    if (k.j->is_number()) {
      cfg.conductivity = k.number(1.0) * Eigen::Matrix3d::Identity();
    } else if (k.is_array() && k.array_size() == 3 && k.element(0).ok() &&
               k.element(0).j->is_number()) {
      cfg.conductivity = Eigen::Matrix3d::Zero();
      for (int i = 0; i < 3; ++i)
        cfg.conductivity(i, i) = k.element(static_cast<std::size_t>(i)).number(1.0);
    } else if (k.is_array() && k.array_size() == 3) {
      for (int i = 0; i < 3; ++i) {
        const Eigen::Vector3d row =
            k.element(static_cast<std::size_t>(i)).vec3(Eigen::Vector3d::Zero());
        cfg.conductivity.row(i) = row.transpose();
      }
    } else {
      check.add("conductivity", "expected scalar, diag triple, or 3x3 rows");
    }
  }
  cfg.rho_cp = root.child("rho_cp").number(1.0);
  cfg.initial_value = root.child("initial_value").number(0.0);
  cfg.fixed_values = parse_fixed_values(root.child("fixed_values"));
  cfg.fluxes = parse_fluxes(root.child("fluxes"));
  cfg.dt = root.child("dt").number(0.0);
  cfg.t_end = root.child("t_end").number(0.0);
  cfg.snapshot_stride = root.child("snapshot_stride").integer(0);
  cfg.probes = parse_probes(root.child("probes"));
  cfg.output_dir = root.child("output_dir").text("");
  cfg.steady_rel_tol = root.child("steady_rel_tol").number(1e-8);
  cfg.stop_at_steady = root.child("stop_at_steady").boolean(false);

  if (cfg.order != 1 && cfg.order != 2) check.add("order", "must be 1 or 2");
  require_positive(root, "dt", cfg.dt, check);
  require_positive(root, "t_end", cfg.t_end, check);
  require_positive(root, "rho_cp", cfg.rho_cp, check);
  if (cfg.fixed_values.empty() && cfg.fluxes.empty())
    check.add("", "at least one boundary condition is required");
  check.finish(path);
  return cfg;
}

DirectionsConfig parse_directions_config(const std::string& path) {
  const json j = load_json(path);
  Checker check;
  Node root{&j, "", &check};
  root.expect_keys({"mesh", "yarns", "vtk"}, {"mesh", "yarns"});
  DirectionsConfig cfg;
  cfg.mesh = root.child("mesh").text("");
  Node yarns = root.child("yarns");
  if (yarns.ok() && yarns.is_array()) {
    for (std::size_t i = 0; i < yarns.array_size(); ++i) {
      Node y = yarns.element(i);
      y.expect_keys({"phase", "inlet", "outlet"}, {"phase", "inlet", "outlet"});
      cfg.yarns.push_back({y.child("phase").integer(0),
                           y.child("inlet").text(""),
                           y.child("outlet").text("")});
    }
  } else if (yarns.ok()) {
    check.add("yarns", "expected an array");
  }
  cfg.vtk_path = root.child("vtk").text("");
  if (cfg.yarns.empty()) check.add("yarns", "at least one yarn is required");
  check.finish(path);
  return cfg;
}

Fe2Config parse_fe2_config(const std::string& path) {
  const json j = load_json(path);
  Checker check;
  Node root{&j, "", &check};
  root.expect_keys(
      {"macro", "rve", "phases", "thermal", "moisture", "mechanical",
       "degradation", "schedule", "probes", "output_dir", "threads"},
      {"macro", "rve", "phases", "degradation", "schedule"});
  Fe2Config cfg;

  Node macro = root.child("macro");
  macro.expect_keys({"mesh", "order", "rho_cp"}, {"mesh"});
  cfg.macro_mesh = macro.child("mesh").text("");
  cfg.macro_order = macro.child("order").integer(1);
  cfg.macro_rho_cp = macro.child("rho_cp").number(1.0);

  Node rve = root.child("rve");
  rve.expect_keys({"bc", "order", "thermal_mesh", "moisture_mesh",
                   "mechanical_mesh", "mesh"},
                  {});
  cfg.rve_bc = parse_bc(rve.child("bc"), BcKind::Periodic);
  cfg.rve_order = rve.child("order").integer(2);
  const std::string shared_mesh = rve.child("mesh").text("");
  cfg.thermal_rve_mesh = rve.child("thermal_mesh").text(shared_mesh);
  cfg.moisture_rve_mesh = rve.child("moisture_mesh").text(shared_mesh);
  cfg.mech_rve_mesh = rve.child("mechanical_mesh").text(shared_mesh);
  if (cfg.thermal_rve_mesh.empty() || cfg.moisture_rve_mesh.empty() ||
      cfg.mech_rve_mesh.empty())
    check.add("rve", "mesh (or per-physics meshes) must be given");

  cfg.phases = parse_phases(root.child("phases"));

  Node th = root.child("thermal");
  if (th.ok()) {
    th.expect_keys({"initial_value", "fixed_values", "fluxes",
                    "seconds_per_day"},
                   {});
    cfg.thermal_initial = th.child("initial_value").number(293.15);
    cfg.thermal_fixed = parse_fixed_values(th.child("fixed_values"));
    cfg.thermal_flux = parse_fluxes(th.child("fluxes"));
    cfg.seconds_per_day = th.child("seconds_per_day").number(86400.0);
  }
  Node mo = root.child("moisture");
  if (mo.ok()) {
    mo.expect_keys({"initial_value", "fixed_values", "fluxes"}, {});
    cfg.moisture_initial = mo.child("initial_value").number(0.0);
    cfg.moisture_fixed = parse_fixed_values(mo.child("fixed_values"));
    cfg.moisture_flux = parse_fluxes(mo.child("fluxes"));
  }

  Node me = root.child("mechanical");
  if (me.ok()) {
    me.expect_keys({"enabled", "fixed", "tractions"}, {});
    cfg.mechanical_stage = me.child("enabled").boolean(true);
    Node fixed = me.child("fixed");
    if (fixed.ok()) {
      if (!fixed.is_array()) check.add(fixed.path, "expected an array");
      for (std::size_t i = 0; i < fixed.array_size(); ++i) {
        Node e = fixed.element(i);
        e.expect_keys({"set", "ux", "uy", "uz"}, {"set"});
        FixedDisplacementBc bc;
        bc.face_set = e.child("set").text("");
        const char* keys[3] = {"ux", "uy", "uz"};
        for (int c = 0; c < 3; ++c) {
          Node comp = e.child(keys[c]);
          if (comp.ok()) bc.value[static_cast<std::size_t>(c)] = comp.number(0.0);
        }
        cfg.mech_fixed.push_back(bc);
      }
    }
    Node tr = me.child("tractions");
    if (tr.ok()) {
      if (!tr.is_array()) check.add(tr.path, "expected an array");
      for (std::size_t i = 0; i < tr.array_size(); ++i) {
        Node e = tr.element(i);
        e.expect_keys({"set", "traction"}, {"set", "traction"});
        cfg.tractions.push_back(
            {e.child("set").text(""),
             e.child("traction").vec3(Eigen::Vector3d::Zero())});
      }
    }
  }

  Node deg = root.child("degradation");
  deg.expect_keys({"beta", "tg_celsius", "tg_kelvin", "g0"}, {"beta"});
  cfg.beta = deg.child("beta").number(0.0);
  Node tgc = deg.child("tg_celsius");
  Node tgk = deg.child("tg_kelvin");
  if (tgk.ok())
    cfg.tg_kelvin = tgk.number(0.0);
  else if (tgc.ok())
    cfg.tg_kelvin = kelvin_from_celsius(tgc.number(0.0));
  else
    check.add("degradation", "tg_celsius or tg_kelvin is required");
  cfg.g0 = deg.child("g0").number(0.0);

  Node sch = root.child("schedule");
  sch.expect_keys({"dt_days", "t_end_days", "snapshot_stride",
                   "cache_resolution"},
                  {"dt_days", "t_end_days"});
  cfg.dt_days = sch.child("dt_days").number(0.0);
  cfg.t_end_days = sch.child("t_end_days").number(0.0);
  cfg.snapshot_stride = sch.child("snapshot_stride").integer(0);
  cfg.cache_resolution = sch.child("cache_resolution").number(1e-3);

  cfg.probes = parse_probes(root.child("probes"));
  cfg.output_dir = root.child("output_dir").text("");
  cfg.threads = root.child("threads").integer(0);

  require_positive(root, "schedule.dt_days", cfg.dt_days, check);
  require_positive(root, "schedule.t_end_days", cfg.t_end_days, check);
  require_positive(root, "schedule.cache_resolution", cfg.cache_resolution,
                   check);
  if (cfg.rve_order != 1 && cfg.rve_order != 2)
    check.add("rve.order", "must be 1 or 2");
  if (cfg.macro_order != 1 && cfg.macro_order != 2)
    check.add("macro.order", "must be 1 or 2");
  if (!(cfg.beta <= 0.0))
    check.add("degradation.beta", "must be <= 0 (decay)");
  if (cfg.phases.empty()) check.add("phases", "at least one phase required");
  check.finish(path);
  return cfg;
}

} // namespace homog

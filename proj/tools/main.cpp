// Command-line front end: every pipeline stage is runnable in isolation
// (homogenize, transient, degrade-fit, directions, mesh-gen) plus the full
// one-way-coupled loop (fe2).
//
// Exit codes: 0 success, 1 computation error, 2 usage error.
// HOMOG_LOG=quiet|info|debug controls verbosity.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "homog/config.hpp"
#include "homog/degradation.hpp"
#include "homog/errors.hpp"
#include "homog/fe2.hpp"
#include "homog/log.hpp"
#include "homog/mesh_gen.hpp"
#include "homog/mesh_io.hpp"
#include "homog/parallel.hpp"
#include "homog/rve.hpp"
#include "homog/transient.hpp"
#include "homog/vtk_io.hpp"
#include "homog/yarn_flow.hpp"

namespace {

using namespace homog;

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << text;
}

struct MeshGenArgs {
  std::vector<int> divisions{4, 4, 4};
  std::vector<double> size{1.0, 1.0, 1.0};
  int layers = 1;
  double radius = 0.25;
  std::string out;
};

int run_mesh_gen(const std::string& kind, const MeshGenArgs& args) {
  if (args.divisions.size() != 3)
    throw ConfigError("--divisions needs nx,ny,nz");
  const std::array<int, 3> div{args.divisions[0], args.divisions[1],
                               args.divisions[2]};
  Mesh mesh;
  if (kind == "box") {
    if (args.size.size() != 3) throw ConfigError("--size needs Lx,Ly,Lz");
    mesh = generate_box(div, {args.size[0], args.size[1], args.size[2]});
  } else if (kind == "laminate") {
    mesh = generate_laminate_rve(args.layers, div);
  } else {
    mesh = generate_embedded_cylinder_rve(div, args.radius);
  }
  write_gmsh(mesh, args.out);
  std::cout << "wrote " << args.out << ": " << mesh.nodes.size() << " nodes, "
            << mesh.tets.size() << " tets, " << mesh.boundary_faces.size()
            << " face sets\n";
  return 0;
}

struct HomogenizeArgs {
  std::string config;
  std::string bc_override;
  std::string physics_override;
  int order_override = 0;
  std::string report_override;
};

int run_homogenize(const HomogenizeArgs& args) {
  HomogenizeConfig cfg = parse_homogenize_config(args.config);
  if (!args.bc_override.empty()) cfg.bc = bc_kind_from_string(args.bc_override);
  if (!args.physics_override.empty()) cfg.physics = args.physics_override;
  if (args.order_override > 0) cfg.order = args.order_override;
  if (!args.report_override.empty()) cfg.report_path = args.report_override;

  Mesh mesh = read_gmsh(cfg.mesh);
  HomogenisedTensor tensor;
  if (cfg.physics == "mech") {
    MechanicalRveModel model(std::move(mesh), cfg.order, cfg.bc, cfg.phases);
    tensor = model.homogenise(cfg.one_minus_omega);
    if (!cfg.vtk_path.empty()) {
      VtkWriter w(model.mesh());
      w.write(cfg.vtk_path, "rve phases");
    }
  } else {
    const bool moisture = cfg.physics == "moisture";
    std::map<int, Eigen::Matrix3d> k;
    for (int tag : mesh.phases()) {
      const PhaseMaterialConfig* p = nullptr;
      for (const auto& ph : cfg.phases)
        if (ph.tag == tag) p = &ph;
      if (!p)
        throw ConfigError("no phase config for mesh phase " +
                          std::to_string(tag));
      const std::optional<double>& v =
          moisture ? p->moisture_diffusivity : p->thermal_conductivity;
      if (!v)
        throw ConfigError("phase " + std::to_string(tag) +
                          " lacks a transport coefficient for " + cfg.physics);
      k[tag] = *v * Eigen::Matrix3d::Identity();
    }
    FeSpace space(mesh, cfg.order);
    PeriodicPairing pairing;
    if (cfg.bc == BcKind::Periodic) pairing = detect_periodic_pairs(mesh);
    tensor = homogenise_conductivity(
        space, cfg.bc, conductivity_by_phase(mesh, k), &pairing,
        moisture ? TensorKind::Moisture : TensorKind::Thermal);
    if (!cfg.vtk_path.empty()) {
      VtkWriter w(mesh);
      w.write(cfg.vtk_path, "rve phases");
    }
  }

  const std::string report = tensor.report();
  std::cout << report;
  if (!cfg.report_path.empty()) write_text(cfg.report_path, report);
  return 0;
}

int run_transient_cmd(const std::string& config_path) {
  TransientCliConfig cfg = parse_transient_config(config_path);
  Mesh mesh = read_gmsh(cfg.mesh);
  FeSpace space(mesh, cfg.order);
  const Eigen::Matrix3d k = cfg.conductivity;
  TransientProblem problem(
      space, [k](int, int, const Eigen::Vector3d&) { return k; },
      [&cfg](int, int, const Eigen::Vector3d&) { return cfg.rho_cp; },
      cfg.fixed_values, cfg.fluxes, cfg.dt);

  TransientRunOptions opts;
  opts.t_end = cfg.t_end;
  opts.snapshot_stride = cfg.snapshot_stride;
  opts.output_dir = cfg.output_dir;
  opts.field_name = cfg.physics == "moisture" ? "c" : "T";
  opts.probes = cfg.probes;
  opts.steady_rel_tol = cfg.steady_rel_tol;
  opts.stop_at_steady = cfg.stop_at_steady;

  const TransientResult result =
      run_transient(problem, problem.initial(cfg.initial_value), opts);
  std::cout << "transient " << cfg.physics << ": "
            << result.final_state.step << " steps to t = "
            << fmt9(result.final_state.time);
  if (result.steady_time >= 0.0)
    std::cout << ", steady at t = " << fmt9(result.steady_time);
  std::cout << "\n";
  if (!result.probe_values.empty() && result.probe_values.back().size() > 0) {
    std::cout << "final probe values:";
    for (Eigen::Index i = 0; i < result.probe_values.back().size(); ++i)
      std::cout << " " << cfg.probes[static_cast<std::size_t>(i)].name << "="
                << fmt9(result.probe_values.back()[i]);
    std::cout << "\n";
  }
  return 0;
}

struct DegradeFitArgs {
  std::string csv;
  double g0 = 0.0;
  double tg_celsius = 0.0;
  std::string report;
};

int run_degrade_fit(const DegradeFitArgs& args) {
  const std::vector<ExperimentSeries> data = read_experiment_csv(args.csv);
  std::map<double, double> alphas;
  double residual_total = 0.0;
  for (const ExperimentSeries& s : data) {
    const AlphaFit fit = fit_alpha(s, args.g0);
    alphas[s.exposure_temp_celsius] = fit.alpha;
    residual_total += fit.residual;
  }
  const BetaFit beta =
      fit_beta(alphas, kelvin_from_celsius(args.tg_celsius));
  const std::string report =
      fit_report(data, args.g0, args.tg_celsius, alphas, beta) +
      "alpha residual  = " + fmt9(residual_total) + "\n";
  std::cout << report;
  if (!args.report.empty()) write_text(args.report, report);
  return 0;
}

int run_directions(const std::string& config_path) {
  DirectionsConfig cfg = parse_directions_config(config_path);
  Mesh mesh = read_gmsh(cfg.mesh);

  Eigen::MatrixX3d cell_dirs =
      Eigen::MatrixX3d::Zero(static_cast<Eigen::Index>(mesh.tets.size()), 3);
  for (const auto& yarn : cfg.yarns) {
    const DirectionField field =
        solve_yarn_directions(mesh, yarn.phase, yarn.inlet, yarn.outlet);
    for (int e : field.elements)
      cell_dirs.row(e) = field.at(e, 0).transpose();
    std::cout << "yarn phase " << yarn.phase << ": " << field.elements.size()
              << " elements, inlet flux = " << fmt9(field.inlet_flux)
              << ", outlet flux = " << fmt9(field.outlet_flux) << "\n";
  }
  if (!cfg.vtk_path.empty()) {
    VtkWriter w(mesh);
    w.add_cell_vector("yarn_direction", cell_dirs);
    w.write(cfg.vtk_path, "yarn directions");
    std::cout << "wrote " << cfg.vtk_path << "\n";
  }
  return 0;
}

int run_fe2_cmd(const std::string& config_path) {
  const Fe2Config cfg = parse_fe2_config(config_path);
  Fe2Driver driver(cfg);
  std::cout << "transport tensors (bc = " << to_string(cfg.rve_bc) << "):\n";
  std::cout << driver.thermal_conductivity().report();
  std::cout << driver.moisture_diffusivity().report();

  const Fe2Driver::RunResult result = driver.run();
  std::cout << "fe2: " << result.steps << " steps of " << fmt9(cfg.dt_days)
            << " days, min(1-w) = " << fmt9(result.final_damage.values.minCoeff())
            << "\n";
  std::cout << "rve cache: " << result.cache.solves << " solves, "
            << result.cache.hits << " hits\n";
  if (!result.summary_path.empty())
    std::cout << "summary: " << result.summary_path << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"multi-scale hygro-thermo-mechanical homogenisation toolkit"};
  app.require_subcommand(1);
  int threads = 0;
  app.add_option("--threads", threads, "cap worker threads (0 = hardware)");

  // mesh-gen
  auto* gen = app.add_subcommand("mesh-gen", "generate test meshes");
  gen->require_subcommand(1);
  MeshGenArgs gen_args;
  std::string gen_kind;
  for (const char* kind : {"box", "laminate", "cylinder"}) {
    auto* sub = gen->add_subcommand(kind);
    sub->add_option("--divisions", gen_args.divisions, "cells per axis")
        ->delimiter(',');
    if (std::string(kind) == "box")
      sub->add_option("--size", gen_args.size, "box extent Lx,Ly,Lz")
          ->delimiter(',');
    if (std::string(kind) == "laminate")
      sub->add_option("--layers", gen_args.layers,
                      "cell layers per phase along z");
    if (std::string(kind) == "cylinder")
      sub->add_option("--radius", gen_args.radius, "cylinder radius");
    sub->add_option("--out", gen_args.out, "output .msh path")->required();
    sub->callback([kind, &gen_kind] { gen_kind = kind; });
  }

  // homogenize
  auto* hom = app.add_subcommand("homogenize",
                                 "homogenise an RVE stiffness/conductivity");
  HomogenizeArgs hom_args;
  hom->add_option("--config", hom_args.config, "JSON config")->required();
  hom->add_option("--bc", hom_args.bc_override,
                  "dirichlet|periodic|neumann (overrides config)");
  hom->add_option("--physics", hom_args.physics_override,
                  "mech|thermal|moisture (overrides config)");
  hom->add_option("--order", hom_args.order_override, "basis order 1|2");
  hom->add_option("--out", hom_args.report_override, "report file");

  // transient
  auto* tr = app.add_subcommand("transient",
                                "macro transient heat/moisture analysis");
  std::string tr_config;
  tr->add_option("--config", tr_config, "JSON config")->required();

  // degrade-fit
  auto* fit = app.add_subcommand("degrade-fit",
                                 "fit the degradation model to CSV data");
  DegradeFitArgs fit_args;
  fit->add_option("--csv", fit_args.csv, "CSV temperature_C,time_days,G_GPa")
      ->required();
  fit->add_option("--g0", fit_args.g0, "dry shear modulus (GPa)")->required();
  fit->add_option("--tg-celsius", fit_args.tg_celsius,
                  "glass transition temperature (C)")
      ->required();
  fit->add_option("--report", fit_args.report, "report file");

  // directions
  auto* dir = app.add_subcommand("directions",
                                 "potential-flow yarn directions");
  std::string dir_config;
  dir->add_option("--config", dir_config, "JSON config")->required();

  // fe2
  auto* fe2 = app.add_subcommand("fe2", "one-way-coupled multi-scale run");
  std::string fe2_config;
  fe2->add_option("--config", fe2_config, "JSON config")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  if (threads > 0) homog::set_max_threads(threads);

  try {
    if (gen->parsed()) return run_mesh_gen(gen_kind, gen_args);
    if (hom->parsed()) return run_homogenize(hom_args);
    if (tr->parsed()) return run_transient_cmd(tr_config);
    if (fit->parsed()) return run_degrade_fit(fit_args);
    if (dir->parsed()) return run_directions(dir_config);
    if (fe2->parsed()) return run_fe2_cmd(fe2_config);
  } catch (const homog::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

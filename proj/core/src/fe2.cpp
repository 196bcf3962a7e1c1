#include "homog/fe2.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>

#include <json.hpp>

#include "homog/errors.hpp"
#include "homog/log.hpp"
#include "homog/mesh_io.hpp"
#include "homog/parallel.hpp"
#include "homog/vtk_io.hpp"

namespace homog {

namespace {

const PhaseMaterialConfig* phase_config(
    const std::vector<PhaseMaterialConfig>& phases, int tag) {
  for (const auto& p : phases)
    if (p.tag == tag) return &p;
  return nullptr;
}

std::map<int, Eigen::Matrix3d> transport_map(
    const Mesh& mesh, const std::vector<PhaseMaterialConfig>& phases,
    bool moisture) {
  std::map<int, Eigen::Matrix3d> out;
  for (int tag : mesh.phases()) {
    const PhaseMaterialConfig* p = phase_config(phases, tag);
    if (!p)
      throw ConfigError("no phase config for mesh phase " +
                        std::to_string(tag));
    const std::optional<double>& v =
        moisture ? p->moisture_diffusivity : p->thermal_conductivity;
    if (!v)
      throw ConfigError("phase " + std::to_string(tag) + " lacks " +
                        (moisture ? "moisture_diffusivity"
                                  : "thermal_conductivity"));
    out[tag] = *v * Eigen::Matrix3d::Identity();
  }
  return out;
}

} // namespace

MechanicalRveModel::MechanicalRveModel(
    Mesh mesh, int order, BcKind bc,
    const std::vector<PhaseMaterialConfig>& phases)
    : mesh_(std::make_unique<Mesh>(std::move(mesh))), bc_(bc) {
  if (!mesh_->validated()) mesh_->validate();
  space_ = std::make_unique<FeSpace>(*mesh_, order);
  if (bc_ == BcKind::Periodic) pairing_ = detect_periodic_pairs(*mesh_);
  constraints_ = build_constraints(*space_, bc_, FieldKind::Mechanical,
                                   &pairing_);

  const std::size_t nqp = tet_quadrature_for_order(order).size();
  for (int tag : mesh_->phases()) {
    const PhaseMaterialConfig* p = phase_config(phases, tag);
    if (!p)
      throw ConfigError("no phase config for mesh phase " +
                        std::to_string(tag));
    phase_is_matrix_[tag] = p->is_matrix;
    if (p->isotropic) {
      base_stiffness_[tag] = isotropic_stiffness(*p->isotropic);
    } else if (p->transversely_isotropic) {
      const Matrix6d local =
          transverse_isotropic_stiffness(*p->transversely_isotropic);
      if (p->flow) {
        flow_fields_.emplace(
            tag, solve_yarn_directions(*mesh_, tag, p->flow->inlet,
                                       p->flow->outlet,
                                       static_cast<int>(nqp)));
        base_stiffness_[tag] = local; // rotated per element below
      } else {
        const Eigen::Vector3d axis =
            p->axis ? p->axis->normalized() : Eigen::Vector3d::UnitZ();
        base_stiffness_[tag] = rotate_stiffness(local, axis);
      }
    } else {
      throw ConfigError("phase " + std::to_string(tag) +
                        " lacks an elastic model");
    }
  }

  // Rotate flow-oriented yarn stiffness once per element/qp.
  for (auto& [tag, field] : flow_fields_) {
    const Matrix6d& local = base_stiffness_.at(tag);
    for (int e : field.elements) {
      std::vector<Matrix6d>& per_qp = rotated_[e];
      per_qp.resize(nqp);
      for (std::size_t q = 0; q < nqp; ++q)
        per_qp[q] = rotate_stiffness(local, field.at(e, static_cast<int>(q)));
    }
  }
}

const DirectionField* MechanicalRveModel::directions(int phase) const {
  auto it = flow_fields_.find(phase);
  return it == flow_fields_.end() ? nullptr : &it->second;
}

StiffnessField MechanicalRveModel::stiffness_field(double one_minus_omega) const {
  return [this, one_minus_omega](int elem, int qp,
                                 const Eigen::Vector3d&) -> Matrix6d {
    const int tag = mesh_->tets[static_cast<std::size_t>(elem)].phase;
    auto rot = rotated_.find(elem);
    const Matrix6d& base = rot != rotated_.end()
                               ? rot->second[static_cast<std::size_t>(qp)]
                               : base_stiffness_.at(tag);
    if (phase_is_matrix_.at(tag)) return one_minus_omega * base;
    return base;
  };
}

HomogenisedTensor MechanicalRveModel::homogenise(double one_minus_omega) const {
  if (!(one_minus_omega > 0.0 && one_minus_omega <= 1.0))
    throw MaterialError("(1 - omega) must lie in (0, 1], got " +
                        std::to_string(one_minus_omega));
  RveProblem problem(*space_, bc_, stiffness_field(one_minus_omega), &pairing_,
                     nullptr, &constraints_);
  return problem.homogenise(TensorKind::Mechanical);
}

Fe2Driver::Fe2Driver(const Fe2Config& cfg) : cfg_(cfg) {
  if (cfg_.threads > 0) set_max_threads(cfg_.threads);

  macro_mesh_ = read_gmsh(cfg_.macro_mesh);
  macro_space_ = std::make_unique<FeSpace>(macro_mesh_, cfg_.macro_order);

  // Transport tensors are homogenised once and reused for every macro Gauss
  // point and every time step.
  {
    Mesh rve = read_gmsh(cfg_.thermal_rve_mesh);
    FeSpace space(rve, cfg_.rve_order);
    PeriodicPairing pairing;
    if (cfg_.rve_bc == BcKind::Periodic) pairing = detect_periodic_pairs(rve);
    k_thermal_ = homogenise_conductivity(
        space, cfg_.rve_bc,
        conductivity_by_phase(rve, transport_map(rve, cfg_.phases, false)),
        &pairing, TensorKind::Thermal);
  }
  {
    Mesh rve = read_gmsh(cfg_.moisture_rve_mesh);
    FeSpace space(rve, cfg_.rve_order);
    PeriodicPairing pairing;
    if (cfg_.rve_bc == BcKind::Periodic) pairing = detect_periodic_pairs(rve);
    d_moisture_ = homogenise_conductivity(
        space, cfg_.rve_bc,
        conductivity_by_phase(rve, transport_map(rve, cfg_.phases, true)),
        &pairing, TensorKind::Moisture);
  }
  if (cfg_.mechanical_stage) {
    mech_rve_ = std::make_unique<MechanicalRveModel>(
        read_gmsh(cfg_.mech_rve_mesh), cfg_.rve_order, cfg_.rve_bc,
        cfg_.phases);
  }

  // Macro transients stepped in days; thermal conductivity is per second.
  const Eigen::Matrix3d k_per_day =
      k_thermal_.values * cfg_.seconds_per_day;
  const Eigen::Matrix3d d_per_day =
      d_moisture_.values * cfg_.seconds_per_day;
  thermal_ = std::make_unique<TransientProblem>(
      *macro_space_,
      [k_per_day](int, int, const Eigen::Vector3d&) { return k_per_day; },
      [this](int, int, const Eigen::Vector3d&) { return cfg_.macro_rho_cp; },
      cfg_.thermal_fixed, cfg_.thermal_flux, cfg_.dt_days);
  moisture_ = std::make_unique<TransientProblem>(
      *macro_space_,
      [d_per_day](int, int, const Eigen::Vector3d&) { return d_per_day; },
      [](int, int, const Eigen::Vector3d&) { return 1.0; },
      cfg_.moisture_fixed, cfg_.moisture_flux, cfg_.dt_days);

  if (cfg_.mechanical_stage) {
    if (cfg_.mech_fixed.empty())
      throw ConfigError("mechanical stage requires at least one fixed set");
    mech_constraints_ = displacement_constraints(*macro_space_, cfg_.mech_fixed);
    mech_load_ = Eigen::VectorXd::Zero(3 * macro_space_->dof_count());
    for (const auto& tr : cfg_.tractions)
      mech_load_ += assemble_traction_load(*macro_space_, tr.face_set,
                                           tr.traction);
  }
}

double Fe2Driver::quantised_w(double w) const {
  const double res = cfg_.cache_resolution;
  long long key = std::llround(w / res);
  if (key < 1) key = 1;
  return std::min(1.0, static_cast<double>(key) * res);
}

Matrix6d Fe2Driver::gauss_point_stiffness(double one_minus_omega) {
  if (!(one_minus_omega > 0.0 && one_minus_omega <= 1.0))
    throw MaterialError("(1 - omega) outside (0, 1]");
  const double res = cfg_.cache_resolution;
  long long key = std::llround(one_minus_omega / res);
  if (key < 1) key = 1;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(key);
    if (it != cache_.end()) {
      ++stats_.hits;
      return it->second;
    }
  }
  const Matrix6d c =
      mech_rve_->homogenise(std::min(1.0, static_cast<double>(key) * res))
          .values;
  std::lock_guard<std::mutex> lock(cache_mutex_);
  auto [it, inserted] = cache_.emplace(key, c);
  if (inserted) ++stats_.solves;
  return it->second;
}

Fe2Driver::CacheStats Fe2Driver::cache_stats() const {
  std::lock_guard<std::mutex> lock(cache_mutex_);
  return stats_;
}

void Fe2Driver::ensure_cached(const std::vector<long long>& keys) {
  std::vector<long long> missing;
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    for (long long k : keys)
      if (!cache_.count(k)) missing.push_back(k);
  }
  std::sort(missing.begin(), missing.end());
  missing.erase(std::unique(missing.begin(), missing.end()), missing.end());
  if (missing.empty()) return;

  // Independent RVE solves against the immutable model.
  std::vector<Matrix6d> solved(missing.size());
  const double res = cfg_.cache_resolution;
  parallel_for(missing.size(), [&](std::size_t i) {
    const double w = std::min(1.0, static_cast<double>(missing[i]) * res);
    solved[i] = mech_rve_->homogenise(w).values;
  });
  std::lock_guard<std::mutex> lock(cache_mutex_);
  for (std::size_t i = 0; i < missing.size(); ++i)
    if (cache_.emplace(missing[i], solved[i]).second) ++stats_.solves;
}

Eigen::VectorXd Fe2Driver::solve_macro_mechanics(
    const Eigen::VectorXd& w_vertex) {
  const TetQuadrature& rule = tet_quadrature_for_order(cfg_.macro_order);
  const std::size_t ne = macro_mesh_.tets.size();
  const double res = cfg_.cache_resolution;

  // Interpolate (1 - omega) to Gauss points (P1 nodal field: vertex block of
  // the tabulated basis), quantise, and collect the needed cache keys.
  std::vector<std::vector<long long>> keys(ne);
  std::vector<long long> wanted;
  for (std::size_t e = 0; e < ne; ++e) {
    const FeSpace::ElementBasis eb =
        macro_space_->tabulate(static_cast<int>(e), rule);
    const Tet& t = macro_mesh_.tets[e];
    keys[e].resize(rule.size());
    for (std::size_t q = 0; q < rule.size(); ++q) {
      double w = 0.0;
      for (int a = 0; a < 4; ++a)
        w += eb.N(static_cast<Eigen::Index>(q), a) * w_vertex[t.n[a]];
      long long key = std::llround(std::clamp(w, 0.0, 1.0) / res);
      if (key < 1) key = 1;
      keys[e][q] = key;
      wanted.push_back(key);
    }
  }
  {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    for (long long k : wanted)
      if (cache_.count(k)) ++stats_.hits;
  }
  ensure_cached(wanted);

  StiffnessField field = [this, &keys](int elem, int qp,
                                       const Eigen::Vector3d&) -> Matrix6d {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    return cache_.at(keys[static_cast<std::size_t>(elem)]
                         [static_cast<std::size_t>(qp)]);
  };
  SparseMat K = assemble_elasticity(*macro_space_, field, &rule);
  SaddleSystem system(std::move(K), mech_constraints_.C);
  const Eigen::VectorXd g =
      mech_constraints_.g0.size() > 0
          ? mech_constraints_.g0
          : Eigen::VectorXd::Zero(mech_constraints_.rows());
  return system.solve(mech_load_, g).u;
}

Fe2Driver::RunResult Fe2Driver::run() {
  namespace fs = std::filesystem;
  const auto t_start = std::chrono::steady_clock::now();
  const bool write_files = !cfg_.output_dir.empty();
  if (write_files) fs::create_directories(cfg_.output_dir);

  const int nverts = macro_space_->vertex_dof_count();
  TransientState temp = thermal_->initial(cfg_.thermal_initial);
  TransientState conc = moisture_->initial(cfg_.moisture_initial);
  DamageField damage{Eigen::VectorXd::Ones(nverts), 0.0};

  std::vector<PointLocation> probe_locs;
  for (const Probe& p : cfg_.probes)
    probe_locs.push_back(locate_point(macro_mesh_, p.point));

  RunResult result;
  Eigen::VectorXd u;
  auto damage_dofs = [&](const DamageField& d) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(macro_space_->dof_count());
    full.head(nverts) = d.values;
    return full;
  };
  auto record = [&](double time) {
    result.times.push_back(time);
    const std::size_t np = probe_locs.size();
    Eigen::VectorXd pt(np), pc(np), pw(np);
    std::vector<Eigen::Vector3d> pu(np);
    const Eigen::VectorXd wd = damage_dofs(damage);
    for (std::size_t i = 0; i < np; ++i) {
      pt[static_cast<Eigen::Index>(i)] =
          evaluate_scalar(*macro_space_, probe_locs[i], temp.field);
      pc[static_cast<Eigen::Index>(i)] =
          evaluate_scalar(*macro_space_, probe_locs[i], conc.field);
      pw[static_cast<Eigen::Index>(i)] =
          evaluate_scalar(*macro_space_, probe_locs[i], wd);
      pu[i] = u.size() > 0
                  ? evaluate_vector3(*macro_space_, probe_locs[i], u)
                  : Eigen::Vector3d::Zero();
    }
    result.probe_T.push_back(std::move(pt));
    result.probe_c.push_back(std::move(pc));
    result.probe_w.push_back(std::move(pw));
    result.probe_u.push_back(std::move(pu));
  };
  auto snapshot = [&](int step) {
    if (!write_files || cfg_.snapshot_stride <= 0) return;
    if (step % cfg_.snapshot_stride != 0) return;
    VtkWriter w(macro_mesh_);
    w.add_point_scalar("T", temp.field.head(nverts));
    w.add_point_scalar("c", conc.field.head(nverts));
    w.add_point_scalar("one_minus_omega", damage.values);
    if (u.size() > 0) {
      Eigen::MatrixX3d disp(nverts, 3);
      for (int v = 0; v < nverts; ++v)
        disp.row(v) = Eigen::Vector3d(u[3 * v], u[3 * v + 1], u[3 * v + 2]);
      w.add_point_vector("displacement", disp);
    }
    char name[64];
    std::snprintf(name, sizeof(name), "fe2_%05d.vtk", step);
    const std::string path = cfg_.output_dir + "/" + name;
    w.write(path, "fe2 step " + std::to_string(step));
    result.snapshot_files.push_back(path);
  };

  // Baseline mechanical solve before any degradation.
  if (cfg_.mechanical_stage) u = solve_macro_mechanics(damage.values);
  record(0.0);
  snapshot(0);

  const int nsteps =
      static_cast<int>(std::llround(cfg_.t_end_days / cfg_.dt_days));
  for (int step = 1; step <= nsteps; ++step) {
    temp = thermal_->step(temp);
    conc = moisture_->step(conc);
    damage = step_damage(damage, temp.field.head(nverts),
                         conc.field.head(nverts), cfg_.dt_days, cfg_.beta,
                         cfg_.tg_kelvin);
    if (cfg_.mechanical_stage) u = solve_macro_mechanics(damage.values);
    record(damage.time_days);
    snapshot(step);
    log::debug("fe2 step ", step, "/", nsteps, ", t = ", damage.time_days,
               " days, min(1-w) = ", damage.values.minCoeff());
  }
  result.steps = nsteps;
  result.final_T = temp.field;
  result.final_c = conc.field;
  result.final_u = u;
  result.final_damage = damage;
  result.cache = cache_stats();

  const double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start)
          .count();

  if (write_files) {
    // Probe histories.
    if (!cfg_.probes.empty()) {
      std::ofstream csv(cfg_.output_dir + "/fe2_probes.csv");
      csv << "time_days";
      for (const Probe& p : cfg_.probes)
        csv << "," << p.name << "_T," << p.name << "_c," << p.name << "_w,"
            << p.name << "_ux," << p.name << "_uy," << p.name << "_uz";
      csv << "\n";
      char buf[32];
      auto put = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.9g", v);
        csv << "," << buf;
      };
      for (std::size_t i = 0; i < result.times.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g", result.times[i]);
        csv << buf;
        for (std::size_t p = 0; p < cfg_.probes.size(); ++p) {
          put(result.probe_T[i][static_cast<Eigen::Index>(p)]);
          put(result.probe_c[i][static_cast<Eigen::Index>(p)]);
          put(result.probe_w[i][static_cast<Eigen::Index>(p)]);
          put(result.probe_u[i][p].x());
          put(result.probe_u[i][p].y());
          put(result.probe_u[i][p].z());
        }
        csv << "\n";
      }
    }

    // Machine-readable run summary.
    nlohmann::json summary;
    auto tensor_json = [](const Eigen::MatrixXd& m) {
      nlohmann::json rows = nlohmann::json::array();
      for (Eigen::Index i = 0; i < m.rows(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
      }
      return rows;
    };
    summary["thermal_conductivity"] = tensor_json(k_thermal_.values);
    summary["moisture_diffusivity"] = tensor_json(d_moisture_.values);
    summary["bc"] = to_string(cfg_.rve_bc);
    summary["steps"] = result.steps;
    summary["dt_days"] = cfg_.dt_days;
    summary["cache"] = {{"solves", result.cache.solves},
                        {"hits", result.cache.hits},
                        {"resolution", cfg_.cache_resolution}};
    summary["wall_seconds"] = wall;
    summary["min_one_minus_omega"] = damage.values.minCoeff();
    if (cfg_.mechanical_stage && cache_.count(std::llround(1.0 / cfg_.cache_resolution)))
      summary["pristine_stiffness"] = tensor_json(
          cache_.at(std::llround(1.0 / cfg_.cache_resolution)));
    const std::string path = cfg_.output_dir + "/fe2_summary.json";
    std::ofstream out(path);
    out << summary.dump(2) << "\n";
    result.summary_path = path;
  }
  return result;
}

} // namespace homog

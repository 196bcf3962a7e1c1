#include "homog/transient.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "homog/errors.hpp"
#include "homog/log.hpp"
#include "homog/vtk_io.hpp"

namespace homog {

TransientProblem::TransientProblem(const FeSpace& space,
                                   const ConductivityField& conductivity,
                                   const CapacityField& rho_cp,
                                   const std::vector<FixedValueBc>& fixed_values,
                                   const std::vector<SurfaceFluxBc>& fluxes,
                                   double dt)
    : space_(&space), dt_(dt) {
  if (!(dt > 0.0)) throw ValidationError("transient dt must be positive");
  K_ = assemble_conductivity(space, conductivity);
  Ccap_ = assemble_capacity(space, rho_cp);
  flux_load_ = Eigen::VectorXd::Zero(space.dof_count());
  for (const SurfaceFluxBc& f : fluxes)
    flux_load_ += assemble_flux_load(space, f.face_set, f.q_s);

  constraints_ = scalar_fixed_value_constraints(space, fixed_values);
  for (int k = 0; k < constraints_.C.outerSize(); ++k)
    for (SparseMat::InnerIterator it(constraints_.C, k); it; ++it)
      pinned_.emplace_back(static_cast<int>(it.col()),
                           constraints_.g0[it.row()]);

  SparseMat A = Ccap_ / dt_ + K_;
  system_ = std::make_unique<SaddleSystem>(std::move(A), constraints_.C);
}

TransientState TransientProblem::initial(double value) const {
  TransientState s;
  s.field = Eigen::VectorXd::Zero(space_->dof_count());
  s.field.head(space_->vertex_dof_count()).setConstant(value);
  for (const auto& [dof, v] : pinned_) s.field[dof] = v;
  return s;
}

TransientState TransientProblem::step(const TransientState& state) const {
  if (state.field.size() != space_->dof_count())
    throw ValidationError("transient state size mismatch");
  const Eigen::VectorXd f = Ccap_ * state.field / dt_ + flux_load_;
  const Eigen::VectorXd g =
      constraints_.g0.size() > 0 ? constraints_.g0
                                 : Eigen::VectorXd::Zero(constraints_.rows());
  SaddleSystem::Solution sol = system_->solve(f, g);

  TransientState next;
  next.field = std::move(sol.u);
  // Prescribed dofs hold their values exactly.
  for (const auto& [dof, v] : pinned_) next.field[dof] = v;
  next.time = state.time + dt_;
  next.step = state.step + 1;
  return next;
}

Eigen::VectorXd TransientProblem::variational_reactions(
    const TransientState& state) const {
  return K_ * state.field - flux_load_;
}

double TransientProblem::reaction_flux(const TransientState& state,
                                       const std::string& face_set) const {
  const Eigen::VectorXd r = variational_reactions(state);
  double sum = 0.0;
  for (int v : face_set_nodes(space_->mesh(), face_set)) sum += r[v];
  return sum;
}

double TransientProblem::applied_flux_total() const {
  // Load functional on the constant-one field: vertex entries only.
  return flux_load_.head(space_->vertex_dof_count()).sum();
}

TransientResult run_transient(const TransientProblem& problem,
                              const TransientState& initial,
                              const TransientRunOptions& options) {
  const FeSpace& space = problem.space();
  const Mesh& mesh = space.mesh();

  std::vector<PointLocation> probe_locs;
  probe_locs.reserve(options.probes.size());
  for (const Probe& p : options.probes)
    probe_locs.push_back(locate_point(mesh, p.point));

  const bool write_files = !options.output_dir.empty();
  if (write_files) std::filesystem::create_directories(options.output_dir);

  TransientResult result;
  TransientState state = initial;
  auto record = [&](const TransientState& s) {
    result.times.push_back(s.time);
    Eigen::VectorXd vals(static_cast<Eigen::Index>(probe_locs.size()));
    for (std::size_t i = 0; i < probe_locs.size(); ++i)
      vals[static_cast<Eigen::Index>(i)] =
          evaluate_scalar(space, probe_locs[i], s.field);
    result.probe_values.push_back(std::move(vals));
  };
  auto snapshot = [&](const TransientState& s) {
    if (!write_files || options.snapshot_stride <= 0) return;
    if (s.step % options.snapshot_stride != 0) return;
    char name[64];
    std::snprintf(name, sizeof(name), "%s_%05d.vtk",
                  options.field_name.c_str(), s.step);
    VtkWriter w(mesh);
    w.add_point_scalar(options.field_name,
                       s.field.head(space.vertex_dof_count()));
    const std::string path = options.output_dir + "/" + name;
    w.write(path, options.field_name + " at t = " + std::to_string(s.time));
    result.snapshot_files.push_back(path);
  };

  record(state);
  snapshot(state);
  const int nsteps =
      static_cast<int>(std::llround(options.t_end / problem.dt()));
  for (int i = 0; i < nsteps; ++i) {
    TransientState next = problem.step(state);
    const double rel_change =
        (next.field - state.field).norm() /
        std::max(state.field.norm(), 1e-30);
    state = std::move(next);
    record(state);
    snapshot(state);
    if (result.steady_time < 0.0 && rel_change < options.steady_rel_tol) {
      result.steady_time = state.time;
      if (options.stop_at_steady) break;
    }
  }

  if (write_files && !options.probes.empty()) {
    std::ofstream csv(options.output_dir + "/" + options.field_name +
                      "_probes.csv");
    csv << "time";
    for (const Probe& p : options.probes) csv << "," << p.name;
    csv << "\n";
    char buf[32];
    for (std::size_t i = 0; i < result.times.size(); ++i) {
      std::snprintf(buf, sizeof(buf), "%.9g", result.times[i]);
      csv << buf;
      for (Eigen::Index j = 0; j < result.probe_values[i].size(); ++j) {
        std::snprintf(buf, sizeof(buf), "%.9g", result.probe_values[i][j]);
        csv << "," << buf;
      }
      csv << "\n";
    }
  }

  result.final_state = std::move(state);
  return result;
}

} // namespace homog

#ifndef HOMOG_TRANSIENT_HPP
#define HOMOG_TRANSIENT_HPP

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "homog/bc.hpp"
#include "homog/saddle.hpp"

namespace homog {

/// Prescribed boundary flux q_s on a named face set.
struct SurfaceFluxBc {
  std::string face_set;
  double q_s = 0.0;
};

/// Nodal scalar field (temperature or concentration) with its clock.
struct TransientState {
  Eigen::VectorXd field;
  double time = 0.0;
  int step = 0;
};

/// Backward-Euler transient conduction/diffusion problem
///   Ccap dpsi/dt + K psi = f
/// with fixed-value sets enforced through constraint rows and fixed-flux sets
/// through the load vector. The left-hand operator (Ccap/dt + K) is
/// factorised once and reused for every step of constant dt.
class TransientProblem {
public:
  TransientProblem(const FeSpace& space, const ConductivityField& conductivity,
                   const CapacityField& rho_cp,
                   const std::vector<FixedValueBc>& fixed_values,
                   const std::vector<SurfaceFluxBc>& fluxes, double dt);

  const FeSpace& space() const { return *space_; }
  double dt() const { return dt_; }

  /// Uniform initial state; prescribed dofs take their boundary values.
  TransientState initial(double value) const;

  /// One backward-Euler step. Prescribed dofs hold their values exactly.
  TransientState step(const TransientState& state) const;

  /// K psi - f: nodal variational boundary fluxes (zero on interior and
  /// natural-boundary rows at steady state).
  Eigen::VectorXd variational_reactions(const TransientState& state) const;

  /// Sum of reactions over the vertex dofs of a face set (total flux through
  /// the prescribed-value boundary, steady state).
  double reaction_flux(const TransientState& state,
                       const std::string& face_set) const;

  /// Total applied flux (the load functional on the constant test field).
  double applied_flux_total() const;

  const SparseMat& conductivity_matrix() const { return K_; }
  const SparseMat& capacity_matrix() const { return Ccap_; }

private:
  const FeSpace* space_;
  double dt_;
  SparseMat K_;
  SparseMat Ccap_;
  Eigen::VectorXd flux_load_;
  ConstraintSet constraints_;
  std::vector<std::pair<int, double>> pinned_; // (dof, value)
  std::unique_ptr<SaddleSystem> system_;
};

/// Named probe point, evaluated by FE interpolation.
struct Probe {
  std::string name;
  Eigen::Vector3d point;
};

struct TransientRunOptions {
  double t_end = 0.0;
  int snapshot_stride = 0;          ///< 0: no snapshots
  std::string output_dir;           ///< empty: no files written
  std::string field_name = "psi";   ///< VTK field label ("T", "c", ...)
  std::vector<Probe> probes;
  double steady_rel_tol = 1e-8;     ///< per-step relative change
  bool stop_at_steady = false;
};

struct TransientResult {
  TransientState final_state;
  double steady_time = -1.0; ///< first time the steady criterion held
  std::vector<double> times;
  std::vector<Eigen::VectorXd> probe_values; ///< per recorded time
  std::vector<std::string> snapshot_files;
};

/// Steps from the initial state to t_end, recording probe histories every
/// step and snapshots every snapshot_stride steps. Writes
/// <output_dir>/<field_name>_NNNN.vtk and <field_name>_probes.csv.
TransientResult run_transient(const TransientProblem& problem,
                              const TransientState& initial,
                              const TransientRunOptions& options);

} // namespace homog

#endif

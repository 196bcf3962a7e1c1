#ifndef HOMOG_FE2_HPP
#define HOMOG_FE2_HPP

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "homog/config.hpp"
#include "homog/degradation.hpp"
#include "homog/fe.hpp"
#include "homog/rve.hpp"
#include "homog/transient.hpp"
#include "homog/yarn_flow.hpp"

namespace homog {

/// Mechanical RVE bundle: mesh, basis, BC family, phase materials with
/// optional potential-flow yarn orientation. homogenise(w) returns the
/// degraded stiffness with the matrix phase scaled by w = (1 - omega).
/// Immutable after construction; homogenise() is safe to call concurrently.
class MechanicalRveModel {
public:
  MechanicalRveModel(Mesh mesh, int order, BcKind bc,
                     const std::vector<PhaseMaterialConfig>& phases);

  const Mesh& mesh() const { return *mesh_; }
  const FeSpace& space() const { return *space_; }
  BcKind bc() const { return bc_; }

  HomogenisedTensor homogenise(double one_minus_omega) const;

  /// Direction field of a flow-oriented yarn phase, nullptr otherwise.
  const DirectionField* directions(int phase) const;

private:
  StiffnessField stiffness_field(double one_minus_omega) const;

  std::unique_ptr<Mesh> mesh_;
  std::unique_ptr<FeSpace> space_;
  BcKind bc_;
  PeriodicPairing pairing_;
  ConstraintSet constraints_;
  std::map<int, Matrix6d> base_stiffness_;   ///< per phase, global axes (fixed part)
  std::map<int, bool> phase_is_matrix_;
  std::map<int, DirectionField> flow_fields_;
  /// Rotated yarn stiffness per (element, qp), precomputed once.
  std::map<int, std::vector<Matrix6d>> rotated_; ///< elem -> per-qp matrices
};

/// One-way-coupled multi-scale driver: transport tensors homogenised once,
/// macro transients advanced per step, damage evolved nodally, and the macro
/// elasticity reassembled per step from memoised C(1-omega) RVE solves.
class Fe2Driver {
public:
  explicit Fe2Driver(const Fe2Config& cfg);
  Fe2Driver(const Fe2Driver&) = delete;
  Fe2Driver& operator=(const Fe2Driver&) = delete;

  const HomogenisedTensor& thermal_conductivity() const { return k_thermal_; }
  const HomogenisedTensor& moisture_diffusivity() const { return d_moisture_; }
  const MechanicalRveModel& mechanical_rve() const { return *mech_rve_; }

  struct CacheStats {
    long long solves = 0;
    long long hits = 0;
  };

  /// Memoised degraded stiffness, keyed on (1-omega) quantised to the
  /// configured resolution.
  Matrix6d gauss_point_stiffness(double one_minus_omega);
  CacheStats cache_stats() const;

  struct RunResult {
    std::vector<double> times;
    std::vector<Eigen::VectorXd> probe_T;
    std::vector<Eigen::VectorXd> probe_c;
    std::vector<Eigen::VectorXd> probe_w;
    std::vector<std::vector<Eigen::Vector3d>> probe_u;
    Eigen::VectorXd final_T;
    Eigen::VectorXd final_c;
    Eigen::VectorXd final_u; ///< empty when the mechanical stage is off
    DamageField final_damage;
    CacheStats cache;
    int steps = 0;
    std::vector<std::string> snapshot_files;
    std::string summary_path;
  };

  RunResult run();

private:
  double quantised_w(double w) const;
  Eigen::VectorXd solve_macro_mechanics(const Eigen::VectorXd& w_vertex);
  void ensure_cached(const std::vector<long long>& keys);

  Fe2Config cfg_;
  Mesh macro_mesh_;
  std::unique_ptr<FeSpace> macro_space_;

  HomogenisedTensor k_thermal_;
  HomogenisedTensor d_moisture_;
  std::unique_ptr<MechanicalRveModel> mech_rve_;

  std::unique_ptr<TransientProblem> thermal_;
  std::unique_ptr<TransientProblem> moisture_;

  ConstraintSet mech_constraints_;
  Eigen::VectorXd mech_load_;

  mutable std::mutex cache_mutex_;
  std::map<long long, Matrix6d> cache_;
  CacheStats stats_;
};

} // namespace homog

#endif

#ifndef HOMOG_RVE_HPP
#define HOMOG_RVE_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "homog/assembly.hpp"
#include "homog/saddle.hpp"

namespace homog {

/// RVE boundary-condition family. Dirichlet pins the boundary fluctuation to
/// zero, Periodic ties opposite-face fluctuations, Neumann enforces only the
/// surface-averaged kinematics (uniform-traction response).
enum class BcKind { Dirichlet, Periodic, Neumann };

enum class FieldKind { Mechanical, Scalar };

BcKind bc_kind_from_string(const std::string& s);
std::string to_string(BcKind bc);

/// X(y) with u_linear = X * macro_strain. Voigt order 11,22,33,12,23,31,
/// engineering shear, so X * e1 = (y1, 0, 0).
Eigen::Matrix<double, 3, 6> macro_displacement_matrix(const Eigen::Vector3d& y);

/// diag(y1, y2, y3); the scalar linear field is the row sum of
/// X * grad_psi, i.e. y . grad_psi.
Eigen::Matrix3d macro_field_matrix(const Eigen::Vector3d& y);

/// T(n) whose column j is the traction of the j-th unit Voigt stress on a
/// face with outward normal n.
Eigen::Matrix<double, 3, 6> unit_stress_tractions(const Eigen::Vector3d& n);

/// Builds the (C, D) constraint pair realising a BC family:
///  - Dirichlet: one unit-selector row per boundary dof, D row from X(y);
///  - Periodic: spanning-forest difference rows over node/edge pair orbits
///    (rank-exact redundancy removal) plus translation/constant pin rows;
///  - Neumann: k surface-moment rows (unit-stress tractions / unit fluxes)
///    plus rigid-mode or constant-mode orthogonality rows.
/// Periodic requires a complete pairing.
ConstraintSet build_constraints(const FeSpace& space, BcKind bc,
                                FieldKind field,
                                const PeriodicPairing* pairing = nullptr);

/// sigma_bar (or q_bar) = (1/V) D^T lambda.
Eigen::VectorXd homogenised_response(const Eigen::VectorXd& lambda,
                                     const Eigen::MatrixXd& D, double volume);

struct RveDiagnostics {
  double hill_mandel_gap = 0.0;      ///< relative work mismatch
  double average_gradient_error = 0.0; ///< |<eps> - macro| / max(|macro|,1)
  double boundary_fluctuation_work = 0.0; ///< relative traction work on fluctuation
  double primal_residual = 0.0;
  double constraint_residual = 0.0;
};

struct RveSolution {
  Eigen::VectorXd field;    ///< micro dofs (u or psi)
  Eigen::VectorXd lambda;   ///< multipliers
  Eigen::VectorXd macro;    ///< applied macro strain / gradient
  Eigen::VectorXd response; ///< homogenised stress / flux from (1/V) D^T lambda
  double volume = 0.0;
  RveDiagnostics diag;
};

enum class TensorKind { Mechanical, Thermal, Moisture };

std::string to_string(TensorKind k);

/// Homogenised 6x6 stiffness or 3x3 conductivity/diffusivity with BC-kind
/// provenance and worst-case per-solve diagnostics.
struct HomogenisedTensor {
  TensorKind kind = TensorKind::Mechanical;
  BcKind bc = BcKind::Periodic;
  Eigen::MatrixXd values;
  RveDiagnostics worst;

  double symmetry_gap() const;
  double min_eigenvalue() const;
  /// Human-readable report (9 significant digits).
  std::string report() const;
};

/// One assembled-and-factorised RVE boundary value problem; solve() may be
/// called for any number of macro vectors against the single factorisation.
/// Instances are immutable after construction and safe to use from one thread
/// at a time; independent instances may run concurrently.
class RveProblem {
public:
  /// prebuilt lets repeated solves on one mesh (the FE2 cache) reuse a
  /// constraint set instead of rebuilding it.
  RveProblem(const FeSpace& space, BcKind bc, StiffnessField stiffness,
             const PeriodicPairing* pairing = nullptr,
             const TetQuadrature* rule = nullptr,
             const ConstraintSet* prebuilt = nullptr);
  RveProblem(const FeSpace& space, BcKind bc, ConductivityField conductivity,
             const PeriodicPairing* pairing = nullptr,
             const TetQuadrature* rule = nullptr,
             const ConstraintSet* prebuilt = nullptr);

  FieldKind field_kind() const { return field_; }
  int macro_size() const { return field_ == FieldKind::Mechanical ? 6 : 3; }
  double volume() const { return volume_; }
  const ConstraintSet& constraints() const { return constraints_; }
  const SaddleSystem& system() const { return *system_; }

  RveSolution solve(const Eigen::VectorXd& macro) const;

  /// Column j = response to the j-th unit macro vector; single factorisation.
  HomogenisedTensor homogenise(TensorKind kind) const;

  /// Volume averages recovered by per-Gauss-point constitutive evaluation
  /// (independent of the lambda-based extraction).
  Eigen::VectorXd volume_average_response(const Eigen::VectorXd& field) const;
  Eigen::VectorXd volume_average_gradient(const Eigen::VectorXd& field) const;

  /// Dof vector interpolating the linear field X(y) * macro.
  Eigen::VectorXd linear_field_dofs(const Eigen::VectorXd& macro) const;

private:
  void finish_setup(BcKind bc, const PeriodicPairing* pairing);
  RveDiagnostics diagnose(const Eigen::VectorXd& u,
                          const Eigen::VectorXd& lambda,
                          const Eigen::VectorXd& macro,
                          const Eigen::VectorXd& response) const;

  const FeSpace* space_;
  FieldKind field_;
  BcKind bc_;
  StiffnessField stiffness_;
  ConductivityField conductivity_;
  const TetQuadrature* rule_;
  double volume_ = 0.0;
  ConstraintSet constraints_;
  std::unique_ptr<SaddleSystem> system_;
};

/// Spec-level one-shot drivers.
HomogenisedTensor homogenise_stiffness(const FeSpace& space, BcKind bc,
                                       const StiffnessField& stiffness,
                                       const PeriodicPairing* pairing = nullptr);
HomogenisedTensor homogenise_conductivity(const FeSpace& space, BcKind bc,
                                          const ConductivityField& k,
                                          const PeriodicPairing* pairing = nullptr,
                                          TensorKind kind = TensorKind::Thermal);

} // namespace homog

#endif

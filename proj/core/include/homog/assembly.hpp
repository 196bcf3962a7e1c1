#ifndef HOMOG_ASSEMBLY_HPP
#define HOMOG_ASSEMBLY_HPP

#include <functional>
#include <map>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "homog/fe.hpp"
#include "homog/mesh.hpp"

namespace homog {

using SparseMat = Eigen::SparseMatrix<double>;
using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// 6x6 stiffness at a quadrature point (Voigt order 11,22,33,12,23,31,
/// engineering shear). Evaluated per element/qp so rotated yarn materials can
/// vary pointwise.
using StiffnessField =
    std::function<Matrix6d(int elem, int qp, const Eigen::Vector3d& y)>;
/// 3x3 conductivity (or diffusivity) at a quadrature point.
using ConductivityField =
    std::function<Eigen::Matrix3d(int elem, int qp, const Eigen::Vector3d& y)>;
/// Positive volumetric capacity rho*c_p at a quadrature point.
using CapacityField =
    std::function<double(int elem, int qp, const Eigen::Vector3d& y)>;

/// Per-phase constant fields; constructors validate SPD / positivity and
/// throw MaterialError naming the offending phase.
StiffnessField stiffness_by_phase(const Mesh& mesh,
                                  const std::map<int, Matrix6d>& of_phase);
ConductivityField conductivity_by_phase(
    const Mesh& mesh, const std::map<int, Eigen::Matrix3d>& of_phase);
CapacityField capacity_by_phase(const Mesh& mesh,
                                const std::map<int, double>& of_phase);

/// Global matrix of integral B^T C B with 3 dofs per basis function
/// (dof = 3*scalar_dof + component). rule == nullptr selects the default rule
/// for the space's order.
SparseMat assemble_elasticity(const FeSpace& space, const StiffnessField& c,
                              const TetQuadrature* rule = nullptr);

/// Global matrix of integral grad(N)^T K grad(N), 1 dof per basis function.
SparseMat assemble_conductivity(const FeSpace& space,
                                const ConductivityField& k,
                                const TetQuadrature* rule = nullptr);

/// Mass-type matrix of integral rho*c_p N^T N.
SparseMat assemble_capacity(const FeSpace& space, const CapacityField& rho_cp,
                            const TetQuadrature* rule = nullptr);

/// Scalar boundary load integral q_s N^T over a named face set.
/// Throws ValidationError for unknown set names.
Eigen::VectorXd assemble_flux_load(const FeSpace& space,
                                   const std::string& face_set, double q_s);

/// Vector boundary load integral N^T t over a named face set (3 dofs per
/// basis function).
Eigen::VectorXd assemble_traction_load(const FeSpace& space,
                                       const std::string& face_set,
                                       const Eigen::Vector3d& traction);

/// Strain-displacement rows at one basis-function column: the 6x3 block B_a
/// for gradient g, Voigt order 11,22,33,12,23,31 with engineering shear.
inline Eigen::Matrix<double, 6, 3> strain_block(const Eigen::Vector3d& g) {
  Eigen::Matrix<double, 6, 3> B = Eigen::Matrix<double, 6, 3>::Zero();
  B(0, 0) = g.x();
  B(1, 1) = g.y();
  B(2, 2) = g.z();
  B(3, 0) = g.y(); B(3, 1) = g.x();
  B(4, 1) = g.z(); B(4, 2) = g.y();
  B(5, 0) = g.z(); B(5, 2) = g.x();
  return B;
}

} // namespace homog

#endif

#ifndef HOMOG_MATERIALS_HPP
#define HOMOG_MATERIALS_HPP

#include <Eigen/Dense>

namespace homog {

using Matrix6d = Eigen::Matrix<double, 6, 6>;

/// Isotropic linear elastic constants (moduli in GPa).
struct IsotropicElastic {
  double E = 0.0;
  double nu = 0.0;
};

/// Transversely isotropic constants; the material z axis is the fibre/yarn
/// direction. nu_z couples axial strain to transverse strain (nu_zp).
struct TransverselyIsotropic {
  double E_p = 0.0;
  double E_z = 0.0;
  double nu_p = 0.0;
  double nu_z = 0.0;
  double G_pz = 0.0;
};

/// Voigt-form isotropic stiffness (order 11,22,33,12,23,31, engineering
/// shear). Throws MaterialError outside E > 0, -1 < nu < 0.5.
Matrix6d isotropic_stiffness(const IsotropicElastic& m);

/// Stiffness in material axes (z = fibre axis), assembled as the inverse of
/// the 5-constant compliance. Throws MaterialError for invalid or singular
/// input.
Matrix6d transverse_isotropic_stiffness(const TransverselyIsotropic& m);

/// Congruence transform of a Voigt stiffness by the rotation taking the local
/// z axis onto the given unit axis (Bond transformation). The in-plane frame
/// is arbitrary; transversely isotropic inputs are insensitive to it.
Matrix6d rotate_stiffness(const Matrix6d& c_local, const Eigen::Vector3d& axis);

/// Rotation matrix used by rotate_stiffness (columns: local axes in global
/// coordinates, third column = axis).
Eigen::Matrix3d frame_from_axis(const Eigen::Vector3d& axis);

/// 6x6 Bond matrix M for stress vectors, sigma_global = M sigma_local, where
/// rot maps local to global coordinates. C_global = M C_local M^T.
Matrix6d bond_stress_transform(const Eigen::Matrix3d& rot);

/// Scalar isotropic damage applied to a matrix-phase stiffness:
/// result = one_minus_omega * c. Requires 0 <= one_minus_omega <= 1.
Matrix6d apply_degradation(const Matrix6d& c_matrix_phase,
                           double one_minus_omega);

} // namespace homog

#endif

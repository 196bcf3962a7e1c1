#include "homog/materials.hpp"

#include <cmath>
#include <sstream>

#include "homog/errors.hpp"

namespace homog {

Matrix6d isotropic_stiffness(const IsotropicElastic& m) {
  if (!(m.E > 0.0)) throw MaterialError("E must be positive");
  if (!(m.nu > -1.0 && m.nu < 0.5))
    throw MaterialError("nu must lie in (-1, 0.5)");
  const double lambda = m.E * m.nu / ((1.0 + m.nu) * (1.0 - 2.0 * m.nu));
  const double mu = m.E / (2.0 * (1.0 + m.nu));
  Matrix6d c = Matrix6d::Zero();
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) c(i, j) = lambda;
    c(i, i) = lambda + 2.0 * mu;
    c(3 + i, 3 + i) = mu;
  }
  return c;
}

Matrix6d transverse_isotropic_stiffness(const TransverselyIsotropic& m) {
  if (!(m.E_p > 0.0 && m.E_z > 0.0 && m.G_pz > 0.0))
    throw MaterialError("transversely isotropic moduli must be positive");
  const double G_p = m.E_p / (2.0 * (1.0 + m.nu_p));

  // Compliance in material axes, z = fibre axis; symmetric coupling uses
  // nu_zp / E_z = nu_pz / E_p.
  Matrix6d s = Matrix6d::Zero();
  s(0, 0) = s(1, 1) = 1.0 / m.E_p;
  s(2, 2) = 1.0 / m.E_z;
  s(0, 1) = s(1, 0) = -m.nu_p / m.E_p;
  s(0, 2) = s(2, 0) = -m.nu_z / m.E_z;
  s(1, 2) = s(2, 1) = -m.nu_z / m.E_z;
  s(3, 3) = 1.0 / G_p;  // 12 shear, in plane
  s(4, 4) = 1.0 / m.G_pz; // 23 shear
  s(5, 5) = 1.0 / m.G_pz; // 31 shear

  Eigen::FullPivLU<Matrix6d> lu(s);
  if (!lu.isInvertible())
    throw MaterialError("transversely isotropic compliance is singular");
  Matrix6d c = lu.inverse();
  // Symmetrise away inversion round-off.
  c = 0.5 * (c + c.transpose()).eval();

  Eigen::SelfAdjointEigenSolver<Matrix6d> es(c);
  if (es.eigenvalues().minCoeff() <= 0.0) {
    std::ostringstream os;
    os << "transversely isotropic stiffness is not positive definite "
          "(min eigenvalue "
       << es.eigenvalues().minCoeff() << ")";
    throw MaterialError(os.str());
  }
  return c;
}

Eigen::Matrix3d frame_from_axis(const Eigen::Vector3d& axis) {
  const double norm = axis.norm();
  if (!(norm > 0.0)) throw MaterialError("zero yarn axis");
  if (std::abs(norm - 1.0) > 1e-12)
    throw MaterialError("yarn axis must be a unit vector");
  const Eigen::Vector3d z = axis / norm;
  const Eigen::Vector3d ez = Eigen::Vector3d::UnitZ();

  // Minimal rotation taking e_z onto z (identity when axis == e_z); the
  // in-plane orientation is immaterial for transversely isotropic materials.
  const double c = ez.dot(z);
  if (c > 1.0 - 1e-15) return Eigen::Matrix3d::Identity();
  if (c < -1.0 + 1e-15) {
    Eigen::Matrix3d r = Eigen::Matrix3d::Identity();
    r(1, 1) = -1.0;
    r(2, 2) = -1.0;
    return r;
  }
  const Eigen::Vector3d v = ez.cross(z);
  Eigen::Matrix3d vx;
  vx << 0, -v.z(), v.y(), v.z(), 0, -v.x(), -v.y(), v.x(), 0;
  return Eigen::Matrix3d::Identity() + vx +
         vx * vx * (1.0 / (1.0 + c));
}

Matrix6d bond_stress_transform(const Eigen::Matrix3d& r) {
  // Voigt order 11,22,33,12,23,31. Index pairs per Voigt slot:
  constexpr int vi[6] = {0, 1, 2, 0, 1, 2};
  constexpr int vj[6] = {0, 1, 2, 1, 2, 0};
  Matrix6d m;
  for (int p = 0; p < 6; ++p) {
    const int i = vi[p], j = vj[p];
    for (int q = 0; q < 3; ++q) m(p, q) = r(i, vi[q]) * r(j, vj[q]);
    for (int q = 3; q < 6; ++q)
      m(p, q) = r(i, vi[q]) * r(j, vj[q]) + r(i, vj[q]) * r(j, vi[q]);
  }
  return m;
}

Matrix6d rotate_stiffness(const Matrix6d& c_local, const Eigen::Vector3d& axis) {
  const Eigen::Matrix3d r = frame_from_axis(axis);
  const Matrix6d m = bond_stress_transform(r);
  Matrix6d c = m * c_local * m.transpose();
  return 0.5 * (c + c.transpose()).eval();
}

Matrix6d apply_degradation(const Matrix6d& c_matrix_phase,
                           double one_minus_omega) {
  if (!(one_minus_omega >= 0.0 && one_minus_omega <= 1.0)) {
    std::ostringstream os;
    os << "(1 - omega) = " << one_minus_omega << " outside [0, 1]";
    throw MaterialError(os.str());
  }
  return one_minus_omega * c_matrix_phase;
}

} // namespace homog

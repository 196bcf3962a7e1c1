#ifndef HOMOG_FE_HPP
#define HOMOG_FE_HPP

#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "homog/mesh.hpp"

namespace homog {

/// Symmetric quadrature rule on the reference tetrahedron, stored as
/// barycentric points with weights summing to one (scale by element volume).
struct TetQuadrature {
  std::vector<Eigen::Vector4d> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

/// 4-point degree-2 rule.
const TetQuadrature& tet_quadrature_degree2();
/// 14-point degree-5 rule (Keast).
const TetQuadrature& tet_quadrature_degree5();
/// Smallest available rule exact to at least the given degree.
const TetQuadrature& tet_quadrature(int degree);
/// Default rule for a basis order: degree 2*order.
const TetQuadrature& tet_quadrature_for_order(int order);

/// Triangle rules, barycentric points, weights summing to one (scale by area).
struct TriQuadrature {
  std::vector<Eigen::Vector3d> points;
  std::vector<double> weights;
  int degree = 0;

  std::size_t size() const { return points.size(); }
};

const TriQuadrature& tri_quadrature_degree2();
const TriQuadrature& tri_quadrature_degree4();
const TriQuadrature& tri_quadrature(int degree);
const TriQuadrature& tri_quadrature_for_order(int order);

/// Scalar H1 space of hierarchic order 1 or 2 on a tet mesh.
///
/// Order 1 carries one dof per mesh node (barycentric hat functions).
/// Order 2 adds one hierarchic bubble 4*la*lb per mesh edge, so the order-1
/// functions are literally the first block of the order-2 basis and assembled
/// operators nest: the order-2 matrix restricted to vertex dofs is the
/// order-1 matrix.
///
/// A constant field has unit vertex coefficients and zero edge coefficients
/// at either order; linear fields likewise have zero edge coefficients.
class FeSpace {
public:
  FeSpace(const Mesh& mesh, int order);

  const Mesh& mesh() const { return *mesh_; }
  int order() const { return order_; }
  /// Scalar dofs: node count (+ edge count at order 2).
  int dof_count() const { return ndof_; }
  int vertex_dof_count() const { return static_cast<int>(mesh_->nodes.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  /// Basis functions per element: 4 or 10.
  int funcs_per_element() const { return order_ == 1 ? 4 : 10; }

  /// Global scalar dof of the hierarchic bubble on edge (a, b); -1 at order 1
  /// or if no such mesh edge exists.
  int edge_dof(int a, int b) const;
  /// Edge endpoints for edge dof index (dof >= vertex_dof_count()).
  std::pair<int, int> edge_nodes(int edge_index) const {
    return edges_[static_cast<std::size_t>(edge_index)];
  }

  /// Scalar dofs of element e, vertex dofs first.
  void element_dofs(int e, std::vector<int>& dofs) const;

  /// Basis tabulation on one element at the points of a volume rule.
  struct ElementBasis {
    Eigen::MatrixXd N;                       ///< nqp x nf values
    std::vector<Eigen::Matrix3Xd> grad;      ///< per qp: 3 x nf
    std::vector<Eigen::Vector3d> qp;         ///< physical quadrature points
    double volume = 0.0;
  };
  ElementBasis tabulate(int e, const TetQuadrature& rule) const;

  /// Trace tabulation on an exterior triangle (oriented outward).
  struct FaceBasis {
    Eigen::MatrixXd N;                  ///< nqp x nf (nf = 3 or 6)
    std::vector<Eigen::Vector3d> qp;    ///< physical quadrature points
    Eigen::Vector3d normal;             ///< unit outward normal
    double area = 0.0;
  };
  FaceBasis tabulate_face(const std::array<int, 3>& tri,
                          const TriQuadrature& rule) const;
  /// Scalar dofs matching tabulate_face columns: 3 vertices (+ 3 face edges).
  void face_dofs(const std::array<int, 3>& tri, std::vector<int>& dofs) const;

private:
  const Mesh* mesh_;
  int order_;
  int ndof_;
  std::vector<std::pair<int, int>> edges_;          // sorted endpoint pairs
  std::unordered_map<std::uint64_t, int> edge_map_; // key(a,b) -> edge index
};

/// Element and barycentric coordinates of a physical point.
struct PointLocation {
  int element = -1;
  Eigen::Vector4d bary = Eigen::Vector4d::Zero();
};

/// Linear search for a tet containing the point (within a small barycentric
/// slack). Throws ValidationError when the point lies outside the mesh.
PointLocation locate_point(const Mesh& mesh, const Eigen::Vector3d& p);

/// FE interpolation of a scalar dof vector at a located point.
double evaluate_scalar(const FeSpace& space, const PointLocation& loc,
                       const Eigen::VectorXd& dofs);

/// FE interpolation of a 3-component dof vector (dof = 3*scalar + c).
Eigen::Vector3d evaluate_vector3(const FeSpace& space, const PointLocation& loc,
                                 const Eigen::VectorXd& dofs);

} // namespace homog

#endif

#ifndef HOMOG_YARN_FLOW_HPP
#define HOMOG_YARN_FLOW_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homog/mesh.hpp"

namespace homog {

/// Unit yarn-direction vectors per (yarn element, quadrature point), plus the
/// potential field the directions were derived from.
struct DirectionField {
  /// directions[i] holds the per-qp unit vectors of yarn element
  /// elements[i]; with an order-1 potential the gradient is constant per
  /// element, so all qp slots of an element carry the same vector.
  std::vector<int> elements;                          ///< full-mesh tet ids
  std::vector<std::vector<Eigen::Vector3d>> directions;
  Eigen::VectorXd phi;                                ///< potential per submesh node
  std::vector<int> submesh_nodes;                     ///< full-mesh node ids
  double inlet_flux = 0.0;
  double outlet_flux = 0.0;

  /// Direction at (full-mesh element, qp); throws if the element is not part
  /// of this yarn.
  const Eigen::Vector3d& at(int element, int qp) const;

  bool has(int element) const;

private:
  friend DirectionField solve_yarn_directions(const Mesh&, int,
                                              const std::string&,
                                              const std::string&, int);
  std::vector<int> index_of_element_; // full-mesh elem -> local index or -1
};

/// Solves the potential-flow Laplace problem on the yarn submesh
/// (phi = 0 on the inlet set, 1 on the outlet set, natural elsewhere) and
/// normalises its gradient per quadrature point. n_qp controls how many qp
/// slots are stored per element (matching the mechanical quadrature rule).
///
/// Throws SolverError for a disconnected yarn, DomainError when the gradient
/// degenerates (stagnation), ValidationError for unknown sets or an empty
/// yarn phase.
DirectionField solve_yarn_directions(const Mesh& mesh, int yarn_phase,
                                     const std::string& inlet_set,
                                     const std::string& outlet_set,
                                     int n_qp = 1);

} // namespace homog

#endif

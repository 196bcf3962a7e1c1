#include "homog/bc.hpp"

#include <map>
#include <set>

#include "homog/errors.hpp"

namespace homog {

namespace {

const std::vector<Tri>& tris_of(const Mesh& mesh, const std::string& set) {
  auto it = mesh.boundary_faces.find(set);
  if (it == mesh.boundary_faces.end())
    throw ValidationError("unknown face set '" + set + "'");
  return it->second;
}

ConstraintSet rows_from_values(int n, const std::map<int, double>& values) {
  const int m = static_cast<int>(values.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(m));
  Eigen::VectorXd g0(m);
  int row = 0;
  for (const auto& [dof, value] : values) {
    trips.emplace_back(row, dof, 1.0);
    g0[row] = value;
    ++row;
  }
  ConstraintSet cs;
  cs.C = SparseMat(m, n);
  cs.C.setFromTriplets(trips.begin(), trips.end());
  cs.D = Eigen::MatrixXd::Zero(m, 0);
  cs.g0 = std::move(g0);
  return cs;
}

} // namespace

std::vector<int> face_set_nodes(const Mesh& mesh, const std::string& set) {
  std::set<int> nodes;
  for (const Tri& t : tris_of(mesh, set))
    for (int v : t.n) nodes.insert(v);
  return {nodes.begin(), nodes.end()};
}

ConstraintSet scalar_fixed_value_constraints(
    const FeSpace& space, const std::vector<FixedValueBc>& bcs) {
  const Mesh& mesh = space.mesh();
  std::map<int, double> values; // first set listed wins on shared dofs
  for (const FixedValueBc& bc : bcs) {
    for (const Tri& t : tris_of(mesh, bc.face_set)) {
      for (int v : t.n) values.try_emplace(v, bc.value);
      if (space.order() == 2) {
        values.try_emplace(space.edge_dof(t.n[0], t.n[1]), 0.0);
        values.try_emplace(space.edge_dof(t.n[0], t.n[2]), 0.0);
        values.try_emplace(space.edge_dof(t.n[1], t.n[2]), 0.0);
      }
    }
  }
  return rows_from_values(space.dof_count(), values);
}

ConstraintSet displacement_constraints(
    const FeSpace& space, const std::vector<FixedDisplacementBc>& bcs) {
  const Mesh& mesh = space.mesh();
  std::map<int, double> values;
  for (const FixedDisplacementBc& bc : bcs) {
    for (const Tri& t : tris_of(mesh, bc.face_set)) {
      for (int c = 0; c < 3; ++c) {
        if (!bc.value[static_cast<std::size_t>(c)]) continue;
        const double val = *bc.value[static_cast<std::size_t>(c)];
        for (int v : t.n) values.try_emplace(3 * v + c, val);
        if (space.order() == 2) {
          values.try_emplace(3 * space.edge_dof(t.n[0], t.n[1]) + c, 0.0);
          values.try_emplace(3 * space.edge_dof(t.n[0], t.n[2]) + c, 0.0);
          values.try_emplace(3 * space.edge_dof(t.n[1], t.n[2]) + c, 0.0);
        }
      }
    }
  }
  return rows_from_values(3 * space.dof_count(), values);
}

} // namespace homog

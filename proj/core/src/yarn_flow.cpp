#include "homog/yarn_flow.hpp"

#include <algorithm>
#include <set>
#include <sstream>
#include <unordered_map>

#include "homog/assembly.hpp"
#include "homog/errors.hpp"
#include "homog/fe.hpp"
#include "homog/saddle.hpp"

namespace homog {

const Eigen::Vector3d& DirectionField::at(int element, int qp) const {
  if (!has(element))
    throw ValidationError("element " + std::to_string(element) +
                          " is not part of this yarn");
  const auto& per_qp =
      directions[static_cast<std::size_t>(index_of_element_[static_cast<std::size_t>(element)])];
  return per_qp[static_cast<std::size_t>(qp) % per_qp.size()];
}

bool DirectionField::has(int element) const {
  return element >= 0 &&
         element < static_cast<int>(index_of_element_.size()) &&
         index_of_element_[static_cast<std::size_t>(element)] >= 0;
}

DirectionField solve_yarn_directions(const Mesh& mesh, int yarn_phase,
                                     const std::string& inlet_set,
                                     const std::string& outlet_set,
                                     int n_qp) {
  if (n_qp < 1) n_qp = 1;

  // Yarn submesh with renumbered nodes.
  std::vector<int> yarn_elems;
  for (int e = 0; e < static_cast<int>(mesh.tets.size()); ++e)
    if (mesh.tets[static_cast<std::size_t>(e)].phase == yarn_phase)
      yarn_elems.push_back(e);
  if (yarn_elems.empty())
    throw ValidationError("no elements carry yarn phase " +
                          std::to_string(yarn_phase));

  std::unordered_map<int, int> sub_of;
  Mesh sub;
  for (int e : yarn_elems) {
    Tet t = mesh.tets[static_cast<std::size_t>(e)];
    for (int& v : t.n) {
      auto [it, inserted] = sub_of.try_emplace(v, static_cast<int>(sub.nodes.size()));
      if (inserted) sub.nodes.push_back(mesh.nodes[static_cast<std::size_t>(v)]);
      v = it->second;
    }
    sub.tets.push_back(t);
  }
  sub.validate();

  // Inlet/outlet nodes: face-set triangles adjacent to yarn elements.
  auto collect = [&](const std::string& set) {
    auto it = mesh.boundary_faces.find(set);
    if (it == mesh.boundary_faces.end())
      throw ValidationError("unknown face set '" + set + "'");
    std::set<int> nodes;
    for (std::size_t i = 0; i < it->second.size(); ++i) {
      const int adj = mesh.face_set_tet(set, i);
      if (adj < 0 ||
          mesh.tets[static_cast<std::size_t>(adj)].phase != yarn_phase)
        continue;
      for (int v : it->second[i].n) {
        auto sit = sub_of.find(v);
        if (sit != sub_of.end()) nodes.insert(sit->second);
      }
    }
    return nodes;
  };
  const std::set<int> inlet = collect(inlet_set);
  const std::set<int> outlet = collect(outlet_set);
  if (inlet.empty() || outlet.empty())
    throw ValidationError("yarn phase " + std::to_string(yarn_phase) +
                          " has no faces on '" + inlet_set + "'/'" +
                          outlet_set + "'");
  for (int v : inlet)
    if (outlet.count(v))
      throw ValidationError("inlet and outlet sets share nodes on the yarn");

  FeSpace space(sub, 1);
  SparseMat K = assemble_conductivity(
      space, [](int, int, const Eigen::Vector3d&) {
        return Eigen::Matrix3d::Identity();
      });

  const int m = static_cast<int>(inlet.size() + outlet.size());
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::VectorXd g0(m);
  int row = 0;
  for (int v : inlet) {
    trips.emplace_back(row, v, 1.0);
    g0[row++] = 0.0;
  }
  for (int v : outlet) {
    trips.emplace_back(row, v, 1.0);
    g0[row++] = 1.0;
  }
  SparseMat C(m, space.dof_count());
  C.setFromTriplets(trips.begin(), trips.end());

  DirectionField out;
  try {
    SaddleSystem sys(std::move(K), C);
    const SaddleSystem::Solution sol =
        sys.solve(Eigen::VectorXd::Zero(space.dof_count()), g0);
    out.phi = sol.u;
    // Variational fluxes: the multipliers are the nodal reactions.
    for (int i = 0; i < static_cast<int>(inlet.size()); ++i)
      out.inlet_flux += sol.lambda[i];
    for (int i = static_cast<int>(inlet.size()); i < m; ++i)
      out.outlet_flux += sol.lambda[i];
  } catch (const SolverError& err) {
    throw SolverError(std::string("yarn potential-flow solve failed (yarn "
                                  "disconnected between inlet and outlet?): ") +
                      err.what());
  }

  // Directions: normalised constant per-element gradient of the potential.
  out.elements = yarn_elems;
  out.index_of_element_.assign(mesh.tets.size(), -1);
  out.directions.resize(yarn_elems.size());
  const TetQuadrature& rule = tet_quadrature_degree2();
  double gmax = 0.0;
  std::vector<Eigen::Vector3d> grads(yarn_elems.size());
  std::vector<int> dofs;
  for (std::size_t i = 0; i < yarn_elems.size(); ++i) {
    const FeSpace::ElementBasis eb = space.tabulate(static_cast<int>(i), rule);
    space.element_dofs(static_cast<int>(i), dofs);
    Eigen::Vector3d g = Eigen::Vector3d::Zero();
    for (std::size_t a = 0; a < dofs.size(); ++a)
      g += eb.grad[0].col(static_cast<Eigen::Index>(a)) * out.phi[dofs[a]];
    grads[i] = g;
    gmax = std::max(gmax, g.norm());
  }
  for (std::size_t i = 0; i < yarn_elems.size(); ++i) {
    const double gn = grads[i].norm();
    if (!(gn > 1e-12 * gmax)) {
      std::ostringstream os;
      os << "degenerate yarn direction (|grad phi| = " << gn
         << ") in element " << yarn_elems[i];
      throw DomainError(os.str());
    }
    out.index_of_element_[static_cast<std::size_t>(yarn_elems[i])] =
        static_cast<int>(i);
    out.directions[i].assign(static_cast<std::size_t>(n_qp),
                             grads[i] / gn);
  }
  out.submesh_nodes.resize(sub.nodes.size());
  for (const auto& [full, local] : sub_of)
    out.submesh_nodes[static_cast<std::size_t>(local)] = full;
  return out;
}

} // namespace homog

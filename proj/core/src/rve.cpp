#include "homog/rve.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <queue>
#include <set>
#include <sstream>
#include <unordered_map>

#include "homog/errors.hpp"

namespace homog {

namespace {

constexpr double kTiny = 1e-300;

std::string fmt9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return buf;
}

} // namespace

BcKind bc_kind_from_string(const std::string& s) {
  if (s == "dirichlet") return BcKind::Dirichlet;
  if (s == "periodic") return BcKind::Periodic;
  if (s == "neumann") return BcKind::Neumann;
  throw ConfigError("unknown bc kind '" + s +
                    "' (expected dirichlet|periodic|neumann)");
}

std::string to_string(BcKind bc) {
  switch (bc) {
    case BcKind::Dirichlet: return "dirichlet";
    case BcKind::Periodic: return "periodic";
    default: return "neumann";
  }
}

std::string to_string(TensorKind k) {
  switch (k) {
    case TensorKind::Mechanical: return "mechanical";
    case TensorKind::Thermal: return "thermal";
    default: return "moisture";
  }
}

Eigen::Matrix<double, 3, 6> macro_displacement_matrix(const Eigen::Vector3d& y) {
  Eigen::Matrix<double, 3, 6> x = Eigen::Matrix<double, 3, 6>::Zero();
  x(0, 0) = y.x();
  x(1, 1) = y.y();
  x(2, 2) = y.z();
  x(0, 3) = 0.5 * y.y();
  x(1, 3) = 0.5 * y.x();
  x(1, 4) = 0.5 * y.z();
  x(2, 4) = 0.5 * y.y();
  x(0, 5) = 0.5 * y.z();
  x(2, 5) = 0.5 * y.x();
  return x;
}

Eigen::Matrix3d macro_field_matrix(const Eigen::Vector3d& y) {
  return y.asDiagonal();
}

Eigen::Matrix<double, 3, 6> unit_stress_tractions(const Eigen::Vector3d& n) {
  Eigen::Matrix<double, 3, 6> t = Eigen::Matrix<double, 3, 6>::Zero();
  t(0, 0) = n.x();
  t(1, 1) = n.y();
  t(2, 2) = n.z();
  t(0, 3) = n.y();
  t(1, 3) = n.x();
  t(1, 4) = n.z();
  t(2, 4) = n.y();
  t(0, 5) = n.z();
  t(2, 5) = n.x();
  return t;
}

namespace {

struct BoundaryDofs {
  std::vector<int> vertices;       // sorted node ids
  std::vector<int> edge_dofs;      // sorted scalar dofs of boundary FE edges
};

BoundaryDofs boundary_dofs(const FeSpace& space) {
  const Mesh& mesh = space.mesh();
  if (mesh.exterior_faces().empty())
    throw ValidationError("mesh has no exterior faces (empty boundary)");
  std::set<int> verts;
  std::set<int> edofs;
  for (const auto& f : mesh.exterior_faces()) {
    for (int v : f.n) verts.insert(v);
    if (space.order() == 2) {
      edofs.insert(space.edge_dof(f.n[0], f.n[1]));
      edofs.insert(space.edge_dof(f.n[0], f.n[2]));
      edofs.insert(space.edge_dof(f.n[1], f.n[2]));
    }
  }
  return {{verts.begin(), verts.end()}, {edofs.begin(), edofs.end()}};
}

// D row(s) of the linear field at a point: 3x6 block for mechanics, 1x3 row
// for scalars.
Eigen::MatrixXd linear_rows(FieldKind field, const Eigen::Vector3d& y) {
  if (field == FieldKind::Mechanical)
    return macro_displacement_matrix(y);
  return y.transpose();
}

int components(FieldKind field) {
  return field == FieldKind::Mechanical ? 3 : 1;
}

int macro_components(FieldKind field) {
  return field == FieldKind::Mechanical ? 6 : 3;
}

ConstraintSet build_dirichlet(const FeSpace& space, FieldKind field) {
  const Mesh& mesh = space.mesh();
  const BoundaryDofs bd = boundary_dofs(space);
  const int nc = components(field);
  const int k = macro_components(field);
  const int m = nc * static_cast<int>(bd.vertices.size() + bd.edge_dofs.size());
  const int n = nc * space.dof_count();

  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(m));
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, k);
  int row = 0;
  for (int v : bd.vertices) {
    const Eigen::MatrixXd rows =
        linear_rows(field, mesh.nodes[static_cast<std::size_t>(v)]);
    for (int c = 0; c < nc; ++c) {
      trips.emplace_back(row, nc * v + c, 1.0);
      D.row(row) = rows.row(c);
      ++row;
    }
  }
  for (int ed : bd.edge_dofs)
    for (int c = 0; c < nc; ++c) trips.emplace_back(row++, nc * ed + c, 1.0);

  ConstraintSet cs;
  cs.C = SparseMat(m, n);
  cs.C.setFromTriplets(trips.begin(), trips.end());
  cs.D = std::move(D);
  return cs;
}

// Spanning forest over an undirected adjacency; emits (parent, child) tree
// edges, children discovered from the smallest root first.
template <typename Neighbors>
std::vector<std::pair<int, int>> spanning_forest(const std::vector<int>& ids,
                                                 const Neighbors& neighbors) {
  std::set<int> pending(ids.begin(), ids.end());
  std::vector<std::pair<int, int>> tree;
  while (!pending.empty()) {
    const int root = *pending.begin();
    pending.erase(pending.begin());
    std::queue<int> q;
    q.push(root);
    while (!q.empty()) {
      const int p = q.front();
      q.pop();
      for (int nb : neighbors(p)) {
        if (pending.erase(nb)) {
          tree.emplace_back(p, nb);
          q.push(nb);
        }
      }
    }
  }
  return tree;
}

ConstraintSet build_periodic(const FeSpace& space, FieldKind field,
                             const PeriodicPairing& pairing) {
  const Mesh& mesh = space.mesh();
  const BoundaryDofs bd = boundary_dofs(space);
  const int nc = components(field);
  const int k = macro_components(field);
  const int n = nc * space.dof_count();

  // Bidirectional per-axis partner maps.
  std::array<std::unordered_map<int, int>, 3> partner;
  for (const PeriodicPair& p : pairing.pairs) {
    partner[static_cast<std::size_t>(p.axis)][p.plus] = p.minus;
    partner[static_cast<std::size_t>(p.axis)][p.minus] = p.plus;
  }
  auto node_neighbors = [&](int v) {
    std::vector<int> nb;
    for (int a = 0; a < 3; ++a) {
      auto it = partner[static_cast<std::size_t>(a)].find(v);
      if (it != partner[static_cast<std::size_t>(a)].end()) nb.push_back(it->second);
    }
    return nb;
  };
  const auto node_tree = spanning_forest(bd.vertices, node_neighbors);

  // FE-edge orbits at order 2: the image of a boundary edge under an axis map
  // must itself be a mesh edge; otherwise the surface meshes do not match.
  std::vector<std::pair<int, int>> edge_tree;
  if (space.order() == 2) {
    auto edge_neighbors = [&](int edof) {
      const auto [a, b] = space.edge_nodes(edof - space.vertex_dof_count());
      std::vector<int> nb;
      for (int ax = 0; ax < 3; ++ax) {
        const auto& pm = partner[static_cast<std::size_t>(ax)];
        auto ia = pm.find(a);
        auto ib = pm.find(b);
        if (ia == pm.end() || ib == pm.end()) continue;
        const int mapped = space.edge_dof(ia->second, ib->second);
        if (mapped < 0) {
          std::ostringstream os;
          os << "boundary meshes are not periodic at order 2: edge (" << a
             << ", " << b << ") maps to a node pair that is not a mesh edge";
          throw PairingError(os.str());
        }
        nb.push_back(mapped);
      }
      return nb;
    };
    edge_tree = spanning_forest(bd.edge_dofs, edge_neighbors);
  }

  const int m_pairs =
      nc * static_cast<int>(node_tree.size() + edge_tree.size());
  const int m = m_pairs + nc; // + translation (or constant) pins
  std::vector<Eigen::Triplet<double>> trips;
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, k);
  int row = 0;
  for (const auto& [p, c] : node_tree) {
    const Eigen::MatrixXd dp =
        linear_rows(field, mesh.nodes[static_cast<std::size_t>(c)]) -
        linear_rows(field, mesh.nodes[static_cast<std::size_t>(p)]);
    for (int cc = 0; cc < nc; ++cc) {
      trips.emplace_back(row, nc * c + cc, 1.0);
      trips.emplace_back(row, nc * p + cc, -1.0);
      D.row(row) = dp.row(cc);
      ++row;
    }
  }
  for (const auto& [p, c] : edge_tree)
    for (int cc = 0; cc < nc; ++cc) {
      trips.emplace_back(row, nc * c + cc, 1.0);
      trips.emplace_back(row, nc * p + cc, -1.0);
      ++row;
    }
  // Pin the rigid translations (mechanics) / the constant mode (scalar),
  // which periodicity leaves free: sum of vertex coefficients is zero.
  for (int cc = 0; cc < nc; ++cc) {
    for (int v = 0; v < space.vertex_dof_count(); ++v)
      trips.emplace_back(row, nc * v + cc, 1.0);
    ++row;
  }

  ConstraintSet cs;
  cs.C = SparseMat(m, n);
  cs.C.setFromTriplets(trips.begin(), trips.end());
  cs.D = std::move(D);
  return cs;
}

ConstraintSet build_neumann(const FeSpace& space, FieldKind field) {
  const Mesh& mesh = space.mesh();
  const int nc = components(field);
  const int k = macro_components(field);
  const int n = nc * space.dof_count();
  const int n_rigid = field == FieldKind::Mechanical ? 6 : 1;
  const int m = k + n_rigid;

  const TriQuadrature& rule = tri_quadrature_for_order(space.order());
  Eigen::MatrixXd Cdense = Eigen::MatrixXd::Zero(k, n);
  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m, k);
  std::vector<int> dofs;
  for (const auto& face : mesh.exterior_faces()) {
    const FeSpace::FaceBasis fb = space.tabulate_face(face.n, rule);
    space.face_dofs(face.n, dofs);
    // Admissible traction/flux distributions: unit Voigt stresses against the
    // outward normal, or unit flux vectors.
    Eigen::MatrixXd t; // k columns of traction values (3 x k or 1 x k)
    if (field == FieldKind::Mechanical)
      t = unit_stress_tractions(fb.normal);
    else
      t = fb.normal.transpose(); // 1x3: flux of e_j through the face
    for (std::size_t kk = 0; kk < rule.size(); ++kk) {
      const double w = rule.weights[kk] * fb.area;
      const Eigen::MatrixXd xr = linear_rows(field, fb.qp[kk]); // nc x k
      for (int j = 0; j < k; ++j) {
        for (std::size_t a = 0; a < dofs.size(); ++a)
          for (int c = 0; c < nc; ++c)
            Cdense(j, nc * dofs[a] + c) +=
                w * t(c, j) *
                fb.N(static_cast<Eigen::Index>(kk), static_cast<Eigen::Index>(a));
        for (int jj = 0; jj < k; ++jj)
          D(j, jj) += w * t.col(j).dot(xr.col(jj));
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trips;
  for (int j = 0; j < k; ++j)
    for (int col = 0; col < n; ++col)
      if (Cdense(j, col) != 0.0) trips.emplace_back(j, col, Cdense(j, col));

  // Rigid-mode (or constant-mode) orthogonality rows with zero D.
  int row = k;
  if (field == FieldKind::Mechanical) {
    Eigen::Vector3d centroid = Eigen::Vector3d::Zero();
    for (const auto& p : mesh.nodes) centroid += p;
    centroid /= static_cast<double>(mesh.nodes.size());
    for (int c = 0; c < 3; ++c) {
      for (int v = 0; v < space.vertex_dof_count(); ++v)
        trips.emplace_back(row, 3 * v + c, 1.0);
      ++row;
    }
    for (int ax = 0; ax < 3; ++ax) {
      const Eigen::Vector3d e = Eigen::Vector3d::Unit(ax);
      for (int v = 0; v < space.vertex_dof_count(); ++v) {
        const Eigen::Vector3d r =
            e.cross(mesh.nodes[static_cast<std::size_t>(v)] - centroid);
        for (int c = 0; c < 3; ++c)
          if (r[c] != 0.0) trips.emplace_back(row, 3 * v + c, r[c]);
      }
      ++row;
    }
  } else {
    for (int v = 0; v < space.vertex_dof_count(); ++v)
      trips.emplace_back(row, v, 1.0);
    ++row;
  }

  ConstraintSet cs;
  cs.C = SparseMat(m, n);
  cs.C.setFromTriplets(trips.begin(), trips.end());
  cs.D = std::move(D);
  return cs;
}

} // namespace

ConstraintSet build_constraints(const FeSpace& space, BcKind bc,
                                FieldKind field,
                                const PeriodicPairing* pairing) {
  switch (bc) {
    case BcKind::Dirichlet: return build_dirichlet(space, field);
    case BcKind::Periodic:
      if (!pairing || pairing->empty())
        throw ValidationError(
            "periodic constraints require a complete node pairing");
      return build_periodic(space, field, *pairing);
    default: return build_neumann(space, field);
  }
}

Eigen::VectorXd homogenised_response(const Eigen::VectorXd& lambda,
                                     const Eigen::MatrixXd& D, double volume) {
  return D.transpose() * lambda / volume;
}

double HomogenisedTensor::symmetry_gap() const {
  const double scale = values.cwiseAbs().maxCoeff();
  if (scale <= 0.0) return 0.0;
  return (values - values.transpose()).cwiseAbs().maxCoeff() / scale;
}

double HomogenisedTensor::min_eigenvalue() const {
  Eigen::MatrixXd sym = 0.5 * (values + values.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sym);
  return es.eigenvalues().minCoeff();
}

std::string HomogenisedTensor::report() const {
  std::ostringstream os;
  os << "homogenised " << to_string(kind) << " tensor (" << values.rows()
     << "x" << values.cols() << "), bc = " << to_string(bc) << "\n";
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j)
      os << (j ? " " : "  ") << fmt9(values(i, j));
    os << "\n";
  }
  os << "symmetry gap (rel) = " << fmt9(symmetry_gap()) << "\n";
  os << "min eigenvalue     = " << fmt9(min_eigenvalue()) << "\n";
  os << "hill-mandel gap    = " << fmt9(worst.hill_mandel_gap) << "\n";
  os << "avg-gradient error = " << fmt9(worst.average_gradient_error) << "\n";
  os << "fluctuation work   = " << fmt9(worst.boundary_fluctuation_work) << "\n";
  os << "residuals          = " << fmt9(worst.primal_residual) << " (primal), "
     << fmt9(worst.constraint_residual) << " (constraint)\n";
  return os.str();
}

RveProblem::RveProblem(const FeSpace& space, BcKind bc,
                       StiffnessField stiffness,
                       const PeriodicPairing* pairing,
                       const TetQuadrature* rule,
                       const ConstraintSet* prebuilt)
    : space_(&space),
      field_(FieldKind::Mechanical),
      bc_(bc),
      stiffness_(std::move(stiffness)),
      rule_(rule ? rule : &tet_quadrature_for_order(space.order())) {
  SparseMat K = assemble_elasticity(space, stiffness_, rule_);
  constraints_ = prebuilt ? *prebuilt : build_constraints(space, bc, field_, pairing);
  system_ = std::make_unique<SaddleSystem>(std::move(K), constraints_.C);
  volume_ = space.mesh().volume();
}

RveProblem::RveProblem(const FeSpace& space, BcKind bc,
                       ConductivityField conductivity,
                       const PeriodicPairing* pairing,
                       const TetQuadrature* rule,
                       const ConstraintSet* prebuilt)
    : space_(&space),
      field_(FieldKind::Scalar),
      bc_(bc),
      conductivity_(std::move(conductivity)),
      rule_(rule ? rule : &tet_quadrature_for_order(space.order())) {
  SparseMat K = assemble_conductivity(space, conductivity_, rule_);
  constraints_ = prebuilt ? *prebuilt : build_constraints(space, bc, field_, pairing);
  system_ = std::make_unique<SaddleSystem>(std::move(K), constraints_.C);
  volume_ = space.mesh().volume();
}

Eigen::VectorXd RveProblem::linear_field_dofs(const Eigen::VectorXd& macro) const {
  const Mesh& mesh = space_->mesh();
  const int nc = components(field_);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(nc * space_->dof_count());
  for (int v = 0; v < space_->vertex_dof_count(); ++v) {
    const Eigen::MatrixXd rows =
        linear_rows(field_, mesh.nodes[static_cast<std::size_t>(v)]);
    for (int c = 0; c < nc; ++c) u[nc * v + c] = rows.row(c).dot(macro);
  }
  return u;
}

RveSolution RveProblem::solve(const Eigen::VectorXd& macro) const {
  if (macro.size() != macro_size())
    throw ValidationError("macro vector size mismatch");
  if (!macro.allFinite())
    throw ValidationError("macro vector has non-finite entries");
  const Eigen::VectorXd g = constraints_.rhs(macro);
  SaddleSystem::Solution s = system_->solve(g);

  RveSolution sol;
  sol.field = std::move(s.u);
  sol.lambda = std::move(s.lambda);
  sol.macro = macro;
  sol.volume = volume_;
  sol.response = homogenised_response(sol.lambda, constraints_.D, volume_);
  sol.diag = diagnose(sol.field, sol.lambda, macro, sol.response);
  sol.diag.primal_residual = s.primal_residual;
  sol.diag.constraint_residual = s.constraint_residual;
  return sol;
}

RveDiagnostics RveProblem::diagnose(const Eigen::VectorXd& u,
                                    const Eigen::VectorXd& lambda,
                                    const Eigen::VectorXd& macro,
                                    const Eigen::VectorXd& response) const {
  const int k = macro_size();
  Eigen::VectorXd avg_grad = Eigen::VectorXd::Zero(k);
  double micro_work = 0.0;

  const Mesh& mesh = space_->mesh();
  std::vector<int> dofs;
  const int nc = components(field_);
  for (int e = 0; e < static_cast<int>(mesh.tets.size()); ++e) {
    const FeSpace::ElementBasis eb = space_->tabulate(e, *rule_);
    space_->element_dofs(e, dofs);
    for (std::size_t kk = 0; kk < rule_->size(); ++kk) {
      const double w = rule_->weights[kk] * eb.volume;
      if (field_ == FieldKind::Mechanical) {
        Eigen::Matrix<double, 6, 1> eps = Eigen::Matrix<double, 6, 1>::Zero();
        for (std::size_t a = 0; a < dofs.size(); ++a) {
          const Eigen::Matrix<double, 6, 3> B = strain_block(eb.grad[kk].col(
              static_cast<Eigen::Index>(a)));
          for (int c = 0; c < 3; ++c)
            eps += B.col(c) * u[nc * dofs[a] + c];
        }
        const Matrix6d C = stiffness_(e, static_cast<int>(kk), eb.qp[kk]);
        const Eigen::Matrix<double, 6, 1> sig = C * eps;
        micro_work += w * eps.dot(sig);
        avg_grad += w * eps;
      } else {
        Eigen::Vector3d grad = Eigen::Vector3d::Zero();
        for (std::size_t a = 0; a < dofs.size(); ++a)
          grad += eb.grad[kk].col(static_cast<Eigen::Index>(a)) * u[dofs[a]];
        const Eigen::Matrix3d K = conductivity_(e, static_cast<int>(kk), eb.qp[kk]);
        micro_work += w * grad.dot(K * grad);
        avg_grad += w * grad;
      }
    }
  }
  avg_grad /= volume_;
  micro_work /= volume_;

  RveDiagnostics d;
  const double macro_work = macro.dot(response);
  const double denom = std::max(std::abs(macro_work), std::abs(micro_work));
  d.hill_mandel_gap =
      denom > kTiny ? std::abs(macro_work - micro_work) / denom : 0.0;
  d.average_gradient_error =
      (avg_grad - macro).norm() / std::max(macro.norm(), 1.0);

  const Eigen::VectorXd fluct = u - linear_field_dofs(macro);
  const double work = lambda.dot(constraints_.C * fluct);
  d.boundary_fluctuation_work =
      std::abs(work) / std::max(volume_ * std::abs(macro_work), 1e-12);
  return d;
}

Eigen::VectorXd RveProblem::volume_average_response(
    const Eigen::VectorXd& u) const {
  const int k = macro_size();
  const int nc = components(field_);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(k);
  const Mesh& mesh = space_->mesh();
  std::vector<int> dofs;
  for (int e = 0; e < static_cast<int>(mesh.tets.size()); ++e) {
    const FeSpace::ElementBasis eb = space_->tabulate(e, *rule_);
    space_->element_dofs(e, dofs);
    for (std::size_t kk = 0; kk < rule_->size(); ++kk) {
      const double w = rule_->weights[kk] * eb.volume;
      if (field_ == FieldKind::Mechanical) {
        Eigen::Matrix<double, 6, 1> eps = Eigen::Matrix<double, 6, 1>::Zero();
        for (std::size_t a = 0; a < dofs.size(); ++a) {
          const Eigen::Matrix<double, 6, 3> B = strain_block(eb.grad[kk].col(
              static_cast<Eigen::Index>(a)));
          for (int c = 0; c < 3; ++c) eps += B.col(c) * u[nc * dofs[a] + c];
        }
        avg += w * (stiffness_(e, static_cast<int>(kk), eb.qp[kk]) * eps);
      } else {
        Eigen::Vector3d grad = Eigen::Vector3d::Zero();
        for (std::size_t a = 0; a < dofs.size(); ++a)
          grad += eb.grad[kk].col(static_cast<Eigen::Index>(a)) * u[dofs[a]];
        avg += w * (conductivity_(e, static_cast<int>(kk), eb.qp[kk]) * grad);
      }
    }
  }
  return avg / volume_;
}

Eigen::VectorXd RveProblem::volume_average_gradient(
    const Eigen::VectorXd& u) const {
  const int k = macro_size();
  const int nc = components(field_);
  Eigen::VectorXd avg = Eigen::VectorXd::Zero(k);
  const Mesh& mesh = space_->mesh();
  std::vector<int> dofs;
  for (int e = 0; e < static_cast<int>(mesh.tets.size()); ++e) {
    const FeSpace::ElementBasis eb = space_->tabulate(e, *rule_);
    space_->element_dofs(e, dofs);
    for (std::size_t kk = 0; kk < rule_->size(); ++kk) {
      const double w = rule_->weights[kk] * eb.volume;
      if (field_ == FieldKind::Mechanical) {
        for (std::size_t a = 0; a < dofs.size(); ++a) {
          const Eigen::Matrix<double, 6, 3> B = strain_block(eb.grad[kk].col(
              static_cast<Eigen::Index>(a)));
          for (int c = 0; c < 3; ++c) avg += w * B.col(c) * u[nc * dofs[a] + c];
        }
      } else {
        for (std::size_t a = 0; a < dofs.size(); ++a)
          avg += w * eb.grad[kk].col(static_cast<Eigen::Index>(a)) * u[dofs[a]];
      }
    }
  }
  return avg / volume_;
}

HomogenisedTensor RveProblem::homogenise(TensorKind kind) const {
  const int k = macro_size();
  HomogenisedTensor out;
  out.kind = kind;
  out.bc = bc_;
  out.values = Eigen::MatrixXd::Zero(k, k);
  for (int j = 0; j < k; ++j) {
    const RveSolution sol = solve(Eigen::VectorXd::Unit(k, j));
    out.values.col(j) = sol.response;
    out.worst.hill_mandel_gap =
        std::max(out.worst.hill_mandel_gap, sol.diag.hill_mandel_gap);
    out.worst.average_gradient_error = std::max(
        out.worst.average_gradient_error, sol.diag.average_gradient_error);
    out.worst.boundary_fluctuation_work =
        std::max(out.worst.boundary_fluctuation_work,
                 sol.diag.boundary_fluctuation_work);
    out.worst.primal_residual =
        std::max(out.worst.primal_residual, sol.diag.primal_residual);
    out.worst.constraint_residual =
        std::max(out.worst.constraint_residual, sol.diag.constraint_residual);
  }
  return out;
}

HomogenisedTensor homogenise_stiffness(const FeSpace& space, BcKind bc,
                                       const StiffnessField& stiffness,
                                       const PeriodicPairing* pairing) {
  RveProblem problem(space, bc, stiffness, pairing);
  return problem.homogenise(TensorKind::Mechanical);
}

HomogenisedTensor homogenise_conductivity(const FeSpace& space, BcKind bc,
                                          const ConductivityField& k,
                                          const PeriodicPairing* pairing,
                                          TensorKind kind) {
  RveProblem problem(space, bc, k, pairing);
  return problem.homogenise(kind);
}

} // namespace homog

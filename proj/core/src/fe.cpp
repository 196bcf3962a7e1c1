#include "homog/fe.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "homog/errors.hpp"

namespace homog {

namespace {

std::uint64_t edge_key(int a, int b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) |
         static_cast<std::uint32_t>(b);
}

TetQuadrature make_tet_degree2() {
  TetQuadrature q;
  q.degree = 2;
  const double a = 0.58541019662496845446; // (5 + 3*sqrt(5)) / 20
  const double b = 0.13819660112501051518; // (5 - sqrt(5)) / 20
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d p(b, b, b, b);
    p[i] = a;
    q.points.push_back(p);
    q.weights.push_back(0.25);
  }
  return q;
}

TetQuadrature make_tet_degree5() {
  // Keast 14-point rule, degree 5, positive weights.
  TetQuadrature q;
  q.degree = 5;
  const double g1 = 0.09273525031089122640;
  const double w1 = 0.07349304311636194954;
  const double g2 = 0.31088591926330060980;
  const double w2 = 0.11268792571801585080;
  const double g3 = 0.04550370412564964949;
  const double w3 = 0.04254602077708146643;
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d p(g1, g1, g1, g1);
    p[i] = 1.0 - 3.0 * g1;
    q.points.push_back(p);
    q.weights.push_back(w1);
  }
  for (int i = 0; i < 4; ++i) {
    Eigen::Vector4d p(g2, g2, g2, g2);
    p[i] = 1.0 - 3.0 * g2;
    q.points.push_back(p);
    q.weights.push_back(w2);
  }
  for (int i = 0; i < 3; ++i)
    for (int s = 0; s < 2; ++s) {
      // the six (g3, g3, 0.5-g3, 0.5-g3) permutations
      Eigen::Vector4d p;
      const double h = 0.5 - g3;
      switch (i * 2 + s) {
        case 0: p << g3, g3, h, h; break;
        case 1: p << h, h, g3, g3; break;
        case 2: p << g3, h, g3, h; break;
        case 3: p << h, g3, h, g3; break;
        case 4: p << g3, h, h, g3; break;
        default: p << h, g3, g3, h; break;
      }
      q.points.push_back(p);
      q.weights.push_back(w3);
    }
  return q;
}

TriQuadrature make_tri_degree2() {
  TriQuadrature q;
  q.degree = 2;
  const double a = 2.0 / 3.0, b = 1.0 / 6.0;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d p(b, b, b);
    p[i] = a;
    q.points.push_back(p);
    q.weights.push_back(1.0 / 3.0);
  }
  return q;
}

TriQuadrature make_tri_degree4() {
  // Dunavant degree-4 rule, 6 points.
  TriQuadrature q;
  q.degree = 4;
  const double a1 = 0.445948490915965;
  const double w1 = 0.223381589678011;
  const double a2 = 0.091576213509771;
  const double w2 = 0.109951743655322;
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d p(a1, a1, a1);
    p[i] = 1.0 - 2.0 * a1;
    q.points.push_back(p);
    q.weights.push_back(w1);
  }
  for (int i = 0; i < 3; ++i) {
    Eigen::Vector3d p(a2, a2, a2);
    p[i] = 1.0 - 2.0 * a2;
    q.points.push_back(p);
    q.weights.push_back(w2);
  }
  return q;
}

// Local edges of a tet, fixed ordering.
constexpr std::array<std::array<int, 2>, 6> kTetEdges = {{
    {0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3},
}};

} // namespace

const TetQuadrature& tet_quadrature_degree2() {
  static const TetQuadrature q = make_tet_degree2();
  return q;
}

const TetQuadrature& tet_quadrature_degree5() {
  static const TetQuadrature q = make_tet_degree5();
  return q;
}

const TetQuadrature& tet_quadrature(int degree) {
  if (degree <= 2) return tet_quadrature_degree2();
  if (degree <= 5) return tet_quadrature_degree5();
  throw ValidationError("no tetrahedron quadrature of degree " +
                        std::to_string(degree));
}

const TetQuadrature& tet_quadrature_for_order(int order) {
  return tet_quadrature(2 * order);
}

const TriQuadrature& tri_quadrature_degree2() {
  static const TriQuadrature q = make_tri_degree2();
  return q;
}

const TriQuadrature& tri_quadrature_degree4() {
  static const TriQuadrature q = make_tri_degree4();
  return q;
}

const TriQuadrature& tri_quadrature(int degree) {
  if (degree <= 2) return tri_quadrature_degree2();
  if (degree <= 4) return tri_quadrature_degree4();
  throw ValidationError("no triangle quadrature of degree " +
                        std::to_string(degree));
}

const TriQuadrature& tri_quadrature_for_order(int order) {
  return tri_quadrature(2 * order);
}

FeSpace::FeSpace(const Mesh& mesh, int order) : mesh_(&mesh), order_(order) {
  if (order != 1 && order != 2)
    throw ValidationError("basis order must be 1 or 2, got " +
                          std::to_string(order));
  ndof_ = static_cast<int>(mesh.nodes.size());
  if (order_ == 2) {
    for (const Tet& t : mesh.tets)
      for (const auto& le : kTetEdges) {
        const std::uint64_t key = edge_key(t.n[le[0]], t.n[le[1]]);
        if (edge_map_.emplace(key, static_cast<int>(edges_.size())).second) {
          int a = t.n[le[0]], b = t.n[le[1]];
          if (a > b) std::swap(a, b);
          edges_.emplace_back(a, b);
        }
      }
    ndof_ += static_cast<int>(edges_.size());
  }
}

int FeSpace::edge_dof(int a, int b) const {
  if (order_ == 1) return -1;
  auto it = edge_map_.find(edge_key(a, b));
  if (it == edge_map_.end()) return -1;
  return vertex_dof_count() + it->second;
}

void FeSpace::element_dofs(int e, std::vector<int>& dofs) const {
  const Tet& t = mesh_->tets[static_cast<std::size_t>(e)];
  dofs.clear();
  for (int v : t.n) dofs.push_back(v);
  if (order_ == 2)
    for (const auto& le : kTetEdges) dofs.push_back(edge_dof(t.n[le[0]], t.n[le[1]]));
}

FeSpace::ElementBasis FeSpace::tabulate(int e, const TetQuadrature& rule) const {
  const Tet& t = mesh_->tets[static_cast<std::size_t>(e)];
  const Eigen::Vector3d& p0 = mesh_->nodes[static_cast<std::size_t>(t.n[0])];
  Eigen::Matrix3d J;
  J.col(0) = mesh_->nodes[static_cast<std::size_t>(t.n[1])] - p0;
  J.col(1) = mesh_->nodes[static_cast<std::size_t>(t.n[2])] - p0;
  J.col(2) = mesh_->nodes[static_cast<std::size_t>(t.n[3])] - p0;
  const double det = J.determinant();

  // Constant barycentric gradients: columns of J^{-T} for l1..l3.
  Eigen::Matrix3d JinvT = J.inverse().transpose();
  Eigen::Matrix<double, 3, 4> grad_l;
  grad_l.col(1) = JinvT.col(0);
  grad_l.col(2) = JinvT.col(1);
  grad_l.col(3) = JinvT.col(2);
  grad_l.col(0) = -(grad_l.col(1) + grad_l.col(2) + grad_l.col(3));

  const int nf = funcs_per_element();
  ElementBasis out;
  out.volume = det / 6.0;
  out.N.resize(static_cast<Eigen::Index>(rule.size()), nf);
  out.grad.resize(rule.size());
  out.qp.resize(rule.size());

  for (std::size_t k = 0; k < rule.size(); ++k) {
    const Eigen::Vector4d& l = rule.points[k];
    Eigen::Matrix3Xd& g = out.grad[k];
    g.resize(3, nf);
    for (int a = 0; a < 4; ++a) {
      out.N(static_cast<Eigen::Index>(k), a) = l[a];
      g.col(a) = grad_l.col(a);
    }
    if (order_ == 2)
      for (int i = 0; i < 6; ++i) {
        const int a = kTetEdges[static_cast<std::size_t>(i)][0];
        const int b = kTetEdges[static_cast<std::size_t>(i)][1];
        out.N(static_cast<Eigen::Index>(k), 4 + i) = 4.0 * l[a] * l[b];
        g.col(4 + i) = 4.0 * (l[a] * grad_l.col(b) + l[b] * grad_l.col(a));
      }
    out.qp[k] = l[0] * p0 +
                l[1] * mesh_->nodes[static_cast<std::size_t>(t.n[1])] +
                l[2] * mesh_->nodes[static_cast<std::size_t>(t.n[2])] +
                l[3] * mesh_->nodes[static_cast<std::size_t>(t.n[3])];
  }
  return out;
}

void FeSpace::face_dofs(const std::array<int, 3>& tri,
                        std::vector<int>& dofs) const {
  dofs.clear();
  for (int v : tri) dofs.push_back(v);
  if (order_ == 2) {
    dofs.push_back(edge_dof(tri[0], tri[1]));
    dofs.push_back(edge_dof(tri[0], tri[2]));
    dofs.push_back(edge_dof(tri[1], tri[2]));
    if (dofs[3] < 0 || dofs[4] < 0 || dofs[5] < 0)
      throw ValidationError("face references an edge absent from the mesh");
  }
}

PointLocation locate_point(const Mesh& mesh, const Eigen::Vector3d& p) {
  constexpr double slack = 1e-10;
  PointLocation best;
  double best_min = -1e300;
  for (int e = 0; e < static_cast<int>(mesh.tets.size()); ++e) {
    const Tet& t = mesh.tets[static_cast<std::size_t>(e)];
    const Eigen::Vector3d& p0 = mesh.nodes[static_cast<std::size_t>(t.n[0])];
    Eigen::Matrix3d J;
    J.col(0) = mesh.nodes[static_cast<std::size_t>(t.n[1])] - p0;
    J.col(1) = mesh.nodes[static_cast<std::size_t>(t.n[2])] - p0;
    J.col(2) = mesh.nodes[static_cast<std::size_t>(t.n[3])] - p0;
    const Eigen::Vector3d ref = J.inverse() * (p - p0);
    Eigen::Vector4d l(1.0 - ref.sum(), ref.x(), ref.y(), ref.z());
    const double lmin = l.minCoeff();
    if (lmin > best_min) {
      best_min = lmin;
      best.element = e;
      best.bary = l;
    }
    if (lmin >= -slack) return {e, l};
  }
  if (best_min >= -1e-6) return best; // on a face/edge with round-off
  std::ostringstream os;
  os << "point (" << p.x() << ", " << p.y() << ", " << p.z()
     << ") lies outside the mesh";
  throw ValidationError(os.str());
}

namespace {

Eigen::VectorXd basis_at(const FeSpace& space, const PointLocation& loc) {
  const Mesh& mesh = space.mesh();
  const Tet& t = mesh.tets[static_cast<std::size_t>(loc.element)];
  (void)t;
  Eigen::VectorXd n(space.funcs_per_element());
  for (int a = 0; a < 4; ++a) n[a] = loc.bary[a];
  if (space.order() == 2)
    for (int i = 0; i < 6; ++i) {
      const auto& le = kTetEdges[static_cast<std::size_t>(i)];
      n[4 + i] = 4.0 * loc.bary[le[0]] * loc.bary[le[1]];
    }
  return n;
}

} // namespace

double evaluate_scalar(const FeSpace& space, const PointLocation& loc,
                       const Eigen::VectorXd& dofs) {
  std::vector<int> edofs;
  space.element_dofs(loc.element, edofs);
  const Eigen::VectorXd n = basis_at(space, loc);
  double v = 0.0;
  for (std::size_t a = 0; a < edofs.size(); ++a)
    v += n[static_cast<Eigen::Index>(a)] * dofs[edofs[a]];
  return v;
}

Eigen::Vector3d evaluate_vector3(const FeSpace& space, const PointLocation& loc,
                                 const Eigen::VectorXd& dofs) {
  std::vector<int> edofs;
  space.element_dofs(loc.element, edofs);
  const Eigen::VectorXd n = basis_at(space, loc);
  Eigen::Vector3d v = Eigen::Vector3d::Zero();
  for (std::size_t a = 0; a < edofs.size(); ++a)
    for (int c = 0; c < 3; ++c)
      v[c] += n[static_cast<Eigen::Index>(a)] * dofs[3 * edofs[a] + c];
  return v;
}

FeSpace::FaceBasis FeSpace::tabulate_face(const std::array<int, 3>& tri,
                                          const TriQuadrature& rule) const {
  const Eigen::Vector3d& p0 = mesh_->nodes[static_cast<std::size_t>(tri[0])];
  const Eigen::Vector3d& p1 = mesh_->nodes[static_cast<std::size_t>(tri[1])];
  const Eigen::Vector3d& p2 = mesh_->nodes[static_cast<std::size_t>(tri[2])];
  const Eigen::Vector3d cr = (p1 - p0).cross(p2 - p0);

  FaceBasis out;
  out.area = 0.5 * cr.norm();
  out.normal = cr.normalized();
  const int nf = order_ == 1 ? 3 : 6;
  out.N.resize(static_cast<Eigen::Index>(rule.size()), nf);
  out.qp.resize(rule.size());

  // Face edges in the same order as face_dofs: (0,1), (0,2), (1,2).
  constexpr std::array<std::array<int, 2>, 3> face_edges = {{{0, 1}, {0, 2}, {1, 2}}};
  for (std::size_t k = 0; k < rule.size(); ++k) {
    const Eigen::Vector3d& m = rule.points[k];
    for (int a = 0; a < 3; ++a) out.N(static_cast<Eigen::Index>(k), a) = m[a];
    if (order_ == 2)
      for (int i = 0; i < 3; ++i) {
        const auto& fe = face_edges[static_cast<std::size_t>(i)];
        out.N(static_cast<Eigen::Index>(k), 3 + i) = 4.0 * m[fe[0]] * m[fe[1]];
      }
    out.qp[k] = m[0] * p0 + m[1] * p1 + m[2] * p2;
  }
  return out;
}

} // namespace homog

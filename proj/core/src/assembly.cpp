#include "homog/assembly.hpp"

#include <sstream>
#include <vector>

#include <Eigen/Cholesky>

#include "homog/errors.hpp"
#include "homog/parallel.hpp"

namespace homog {

namespace {

using Triplet = Eigen::Triplet<double>;

int phase_of(const Mesh& mesh, int elem) {
  return mesh.tets[static_cast<std::size_t>(elem)].phase;
}

template <typename M>
void require_spd(const M& m, int phase, const char* what) {
  if (!m.isApprox(m.transpose(), 1e-10)) {
    std::ostringstream os;
    os << what << " for phase " << phase << " is not symmetric";
    throw MaterialError(os.str());
  }
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) {
    std::ostringstream os;
    os << what << " for phase " << phase << " is not positive definite";
    throw MaterialError(os.str());
  }
}

// Deterministic parallel element-loop assembly: per-chunk triplet buffers are
// concatenated in chunk order, so the final triplet list does not depend on
// the thread count.
template <typename ElementKernel>
SparseMat assemble(const FeSpace& space, int dofs_per_func,
                   const ElementKernel& kernel, const TetQuadrature& rule) {
  const Mesh& mesh = space.mesh();
  const std::size_t ne = mesh.tets.size();
  const int n = space.dof_count() * dofs_per_func;

  const std::size_t chunk = 256;
  const std::size_t nchunks = (ne + chunk - 1) / chunk;
  std::vector<std::vector<Triplet>> buffers(nchunks);

  parallel_chunks(
      ne,
      [&](std::size_t begin, std::size_t end) {
        std::vector<Triplet>& buf = buffers[begin / chunk];
        std::vector<int> dofs;
        for (std::size_t e = begin; e < end; ++e) {
          space.element_dofs(static_cast<int>(e), dofs);
          kernel(static_cast<int>(e), rule, dofs, buf);
        }
      },
      chunk);

  std::vector<Triplet> triplets;
  std::size_t total = 0;
  for (const auto& b : buffers) total += b.size();
  triplets.reserve(total);
  for (const auto& b : buffers) triplets.insert(triplets.end(), b.begin(), b.end());

  SparseMat K(n, n);
  K.setFromTriplets(triplets.begin(), triplets.end());
  K.makeCompressed();
  return K;
}

} // namespace

StiffnessField stiffness_by_phase(const Mesh& mesh,
                                  const std::map<int, Matrix6d>& of_phase) {
  for (const auto& [phase, m] : of_phase) require_spd(m, phase, "stiffness");
  for (int p : mesh.phases())
    if (!of_phase.count(p))
      throw MaterialError("no stiffness given for phase " + std::to_string(p));
  return [&mesh, of_phase](int elem, int, const Eigen::Vector3d&) {
    return of_phase.at(phase_of(mesh, elem));
  };
}

ConductivityField conductivity_by_phase(
    const Mesh& mesh, const std::map<int, Eigen::Matrix3d>& of_phase) {
  for (const auto& [phase, m] : of_phase) require_spd(m, phase, "conductivity");
  for (int p : mesh.phases())
    if (!of_phase.count(p))
      throw MaterialError("no conductivity given for phase " +
                          std::to_string(p));
  return [&mesh, of_phase](int elem, int, const Eigen::Vector3d&) {
    return of_phase.at(phase_of(mesh, elem));
  };
}

CapacityField capacity_by_phase(const Mesh& mesh,
                                const std::map<int, double>& of_phase) {
  for (const auto& [phase, v] : of_phase)
    if (!(v > 0.0))
      throw MaterialError("rho*c_p for phase " + std::to_string(phase) +
                          " must be positive, got " + std::to_string(v));
  for (int p : mesh.phases())
    if (!of_phase.count(p))
      throw MaterialError("no rho*c_p given for phase " + std::to_string(p));
  return [&mesh, of_phase](int elem, int, const Eigen::Vector3d&) {
    return of_phase.at(phase_of(mesh, elem));
  };
}

SparseMat assemble_elasticity(const FeSpace& space, const StiffnessField& c,
                              const TetQuadrature* rule) {
  const TetQuadrature& q = rule ? *rule : tet_quadrature_for_order(space.order());
  auto kernel = [&](int e, const TetQuadrature& r, const std::vector<int>& dofs,
                    std::vector<Triplet>& buf) {
    const FeSpace::ElementBasis eb = space.tabulate(e, r);
    const int nf = static_cast<int>(dofs.size());
    // Per-pair 3x3 blocks accumulated over quadrature points with explicit
    // loops; the vertex-vertex block arithmetic is then independent of the
    // basis order, which keeps the hierarchic nesting exact.
    std::vector<Eigen::Matrix<double, 6, 3>> B(static_cast<std::size_t>(nf));
    std::vector<Eigen::Matrix3d> blocks(
        static_cast<std::size_t>(nf * nf), Eigen::Matrix3d::Zero());
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double w = r.weights[k] * eb.volume;
      const Matrix6d C = c(e, static_cast<int>(k), eb.qp[k]);
      for (int a = 0; a < nf; ++a)
        B[static_cast<std::size_t>(a)] = strain_block(eb.grad[k].col(a));
      for (int a = 0; a < nf; ++a) {
        const Eigen::Matrix<double, 6, 3> CB = C * B[static_cast<std::size_t>(a)];
        for (int b = 0; b < nf; ++b)
          blocks[static_cast<std::size_t>(a * nf + b)] +=
              w * (B[static_cast<std::size_t>(b)].transpose() * CB);
      }
    }
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b) {
        const Eigen::Matrix3d& blk = blocks[static_cast<std::size_t>(a * nf + b)];
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j)
            buf.emplace_back(3 * dofs[static_cast<std::size_t>(b)] + i,
                             3 * dofs[static_cast<std::size_t>(a)] + j,
                             blk(i, j));
      }
  };
  return assemble(space, 3, kernel, q);
}

SparseMat assemble_conductivity(const FeSpace& space,
                                const ConductivityField& kf,
                                const TetQuadrature* rule) {
  const TetQuadrature& q = rule ? *rule : tet_quadrature_for_order(space.order());
  auto kernel = [&](int e, const TetQuadrature& r, const std::vector<int>& dofs,
                    std::vector<Triplet>& buf) {
    const FeSpace::ElementBasis eb = space.tabulate(e, r);
    const int nf = static_cast<int>(dofs.size());
    std::vector<double> acc(static_cast<std::size_t>(nf * nf), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double w = r.weights[k] * eb.volume;
      const Eigen::Matrix3d K = kf(e, static_cast<int>(k), eb.qp[k]);
      for (int a = 0; a < nf; ++a) {
        const Eigen::Vector3d Kg = K * eb.grad[k].col(a);
        for (int b = 0; b < nf; ++b)
          acc[static_cast<std::size_t>(a * nf + b)] +=
              w * eb.grad[k].col(b).dot(Kg);
      }
    }
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b)
        buf.emplace_back(dofs[static_cast<std::size_t>(b)],
                         dofs[static_cast<std::size_t>(a)],
                         acc[static_cast<std::size_t>(a * nf + b)]);
  };
  return assemble(space, 1, kernel, q);
}

SparseMat assemble_capacity(const FeSpace& space, const CapacityField& rho_cp,
                            const TetQuadrature* rule) {
  const TetQuadrature& q = rule ? *rule : tet_quadrature_for_order(space.order());
  auto kernel = [&](int e, const TetQuadrature& r, const std::vector<int>& dofs,
                    std::vector<Triplet>& buf) {
    const FeSpace::ElementBasis eb = space.tabulate(e, r);
    const int nf = static_cast<int>(dofs.size());
    std::vector<double> acc(static_cast<std::size_t>(nf * nf), 0.0);
    for (std::size_t k = 0; k < r.size(); ++k) {
      const double rc = rho_cp(e, static_cast<int>(k), eb.qp[k]);
      if (!(rc > 0.0))
        throw MaterialError("rho*c_p must be positive, got " +
                            std::to_string(rc));
      const double w = r.weights[k] * eb.volume * rc;
      for (int a = 0; a < nf; ++a)
        for (int b = 0; b < nf; ++b)
          acc[static_cast<std::size_t>(a * nf + b)] +=
              w * eb.N(static_cast<Eigen::Index>(k), a) *
              eb.N(static_cast<Eigen::Index>(k), b);
    }
    for (int a = 0; a < nf; ++a)
      for (int b = 0; b < nf; ++b)
        buf.emplace_back(dofs[static_cast<std::size_t>(b)],
                         dofs[static_cast<std::size_t>(a)],
                         acc[static_cast<std::size_t>(a * nf + b)]);
  };
  return assemble(space, 1, kernel, q);
}

namespace {

const std::vector<Tri>& named_face_set(const Mesh& mesh,
                                       const std::string& face_set) {
  auto it = mesh.boundary_faces.find(face_set);
  if (it == mesh.boundary_faces.end())
    throw ValidationError("unknown face set '" + face_set + "'");
  return it->second;
}

} // namespace

Eigen::VectorXd assemble_flux_load(const FeSpace& space,
                                   const std::string& face_set, double q_s) {
  const std::vector<Tri>& tris = named_face_set(space.mesh(), face_set);
  const TriQuadrature& rule = tri_quadrature_for_order(space.order());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(space.dof_count());
  std::vector<int> dofs;
  for (const Tri& tri : tris) {
    const FeSpace::FaceBasis fb = space.tabulate_face(tri.n, rule);
    space.face_dofs(tri.n, dofs);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double w = rule.weights[k] * fb.area * q_s;
      for (std::size_t a = 0; a < dofs.size(); ++a)
        f[dofs[a]] += w * fb.N(static_cast<Eigen::Index>(k),
                               static_cast<Eigen::Index>(a));
    }
  }
  return f;
}

Eigen::VectorXd assemble_traction_load(const FeSpace& space,
                                       const std::string& face_set,
                                       const Eigen::Vector3d& traction) {
  const std::vector<Tri>& tris = named_face_set(space.mesh(), face_set);
  const TriQuadrature& rule = tri_quadrature_for_order(space.order());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(3 * space.dof_count());
  std::vector<int> dofs;
  for (const Tri& tri : tris) {
    const FeSpace::FaceBasis fb = space.tabulate_face(tri.n, rule);
    space.face_dofs(tri.n, dofs);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double w = rule.weights[k] * fb.area;
      for (std::size_t a = 0; a < dofs.size(); ++a)
        for (int c = 0; c < 3; ++c)
          f[3 * dofs[a] + c] += w *
                                fb.N(static_cast<Eigen::Index>(k),
                                     static_cast<Eigen::Index>(a)) *
                                traction[c];
    }
  }
  return f;
}

} // namespace homog

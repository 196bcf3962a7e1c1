#include "homog/mesh_gen.hpp"

#include <algorithm>
#include <sstream>

#include "homog/errors.hpp"

namespace homog {

namespace {

// The six Kuhn tets of a unit cell, as vertex paths c -> c+(1,1,1) adding one
// axis at a time; permutation order keeps neighbouring cells face-compatible.
constexpr std::array<std::array<int, 3>, 6> kAxisPerms = {{
    {0, 1, 2},
    {0, 2, 1},
    {1, 0, 2},
    {1, 2, 0},
    {2, 0, 1},
    {2, 1, 0},
}};

bool perm_is_even(const std::array<int, 3>& p) {
  int inv = 0;
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (p[i] > p[j]) ++inv;
  return inv % 2 == 0;
}

} // namespace

Mesh generate_box(const std::array<int, 3>& divisions,
                  const Eigen::Vector3d& extent) {
  for (int d : divisions)
    if (d < 1) throw ValidationError("box divisions must be >= 1 per axis");

  const int nx = divisions[0], ny = divisions[1], nz = divisions[2];
  Mesh mesh;
  auto node_id = [&](int i, int j, int k) {
    return (k * (ny + 1) + j) * (nx + 1) + i;
  };
  mesh.nodes.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1) * (nz + 1)));
  for (int k = 0; k <= nz; ++k)
    for (int j = 0; j <= ny; ++j)
      for (int i = 0; i <= nx; ++i)
        mesh.nodes.emplace_back(extent[0] * i / nx, extent[1] * j / ny,
                                extent[2] * k / nz);

  mesh.tets.reserve(static_cast<std::size_t>(nx * ny * nz * 6));
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const std::array<int, 3> c{i, j, k};
        for (const auto& perm : kAxisPerms) {
          std::array<int, 3> v = c;
          std::array<int, 4> ids;
          ids[0] = node_id(v[0], v[1], v[2]);
          for (int s = 0; s < 3; ++s) {
            v[static_cast<std::size_t>(perm[s])] += 1;
            ids[static_cast<std::size_t>(s + 1)] = node_id(v[0], v[1], v[2]);
          }
          if (!perm_is_even(perm)) std::swap(ids[1], ids[2]);
          mesh.tets.push_back(Tet{ids, 1});
        }
      }

  // Box face sets; quads split along the same diagonals the Kuhn tets use.
  auto add_face = [&](const std::string& set, int a, int b, int c) {
    mesh.boundary_faces[set].push_back(Tri{{a, b, c}});
  };
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j) {
      add_face("xmin", node_id(0, j, k), node_id(0, j + 1, k),
               node_id(0, j + 1, k + 1));
      add_face("xmin", node_id(0, j, k), node_id(0, j + 1, k + 1),
               node_id(0, j, k + 1));
      add_face("xmax", node_id(nx, j, k), node_id(nx, j + 1, k),
               node_id(nx, j + 1, k + 1));
      add_face("xmax", node_id(nx, j, k), node_id(nx, j + 1, k + 1),
               node_id(nx, j, k + 1));
    }
  for (int k = 0; k < nz; ++k)
    for (int i = 0; i < nx; ++i) {
      add_face("ymin", node_id(i, 0, k), node_id(i + 1, 0, k),
               node_id(i + 1, 0, k + 1));
      add_face("ymin", node_id(i, 0, k), node_id(i + 1, 0, k + 1),
               node_id(i, 0, k + 1));
      add_face("ymax", node_id(i, ny, k), node_id(i + 1, ny, k),
               node_id(i + 1, ny, k + 1));
      add_face("ymax", node_id(i, ny, k), node_id(i + 1, ny, k + 1),
               node_id(i, ny, k + 1));
    }
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      add_face("zmin", node_id(i, j, 0), node_id(i + 1, j, 0),
               node_id(i + 1, j + 1, 0));
      add_face("zmin", node_id(i, j, 0), node_id(i + 1, j + 1, 0),
               node_id(i, j + 1, 0));
      add_face("zmax", node_id(i, j, nz), node_id(i + 1, j, nz),
               node_id(i + 1, j + 1, nz));
      add_face("zmax", node_id(i, j, nz), node_id(i + 1, j + 1, nz),
               node_id(i, j + 1, nz));
    }

  mesh.phase_names[1] = "matrix";
  mesh.validate();
  return mesh;
}

Mesh generate_laminate_rve(int n_layers_per_phase,
                           const std::array<int, 3>& divisions) {
  if (n_layers_per_phase < 1)
    throw ValidationError("n_layers_per_phase must be >= 1");
  Mesh mesh = generate_box(divisions);
  const int nz = divisions[2];
  const double dz = 1.0 / nz;
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const double zc = mesh.centroid(static_cast<int>(e)).z();
    const int layer = std::min(nz - 1, static_cast<int>(zc / dz));
    mesh.tets[e].phase = (layer / n_layers_per_phase) % 2 == 0 ? 1 : 2;
  }
  mesh.phase_names[1] = "phase1";
  mesh.phase_names[2] = "phase2";
  mesh.validate();
  return mesh;
}

Mesh generate_embedded_cylinder_rve(const std::array<int, 3>& divisions,
                                    double radius) {
  if (radius <= 0.0 || radius >= 0.5) {
    std::ostringstream os;
    os << "cylinder radius " << radius << " must lie in (0, 0.5)";
    throw ValidationError(os.str());
  }
  Mesh mesh = generate_box(divisions);
  const Eigen::Vector2d axis_xy(0.5, 0.5);
  for (std::size_t e = 0; e < mesh.tets.size(); ++e) {
    const Eigen::Vector3d c = mesh.centroid(static_cast<int>(e));
    const double r = (Eigen::Vector2d(c.x(), c.y()) - axis_xy).norm();
    mesh.tets[e].phase = r <= radius ? 2 : 1;
  }
  mesh.phase_names[1] = "matrix";
  mesh.phase_names[2] = "yarn";
  mesh.validate();
  return mesh;
}

} // namespace homog

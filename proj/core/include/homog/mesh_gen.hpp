#ifndef HOMOG_MESH_GEN_HPP
#define HOMOG_MESH_GEN_HPP

#include <array>

#include "homog/mesh.hpp"

namespace homog {

/// Structured box mesh of size extent, divisions per axis, 6 tets per cell
/// (Kuhn subdivision; geometrically periodic node layout on opposite faces).
/// All tets carry phase tag 1. Face sets: xmin,xmax,ymin,ymax,zmin,zmax.
Mesh generate_box(const std::array<int, 3>& divisions,
                  const Eigen::Vector3d& extent = {1.0, 1.0, 1.0});

/// Unit-cube laminate RVE: alternating phase tags 1,2 in layers normal to
/// axis 3, each layer block n_layers_per_phase cell-layers thick.
Mesh generate_laminate_rve(int n_layers_per_phase,
                           const std::array<int, 3>& divisions);

/// Unit-cube RVE with an embedded axis-3 cylinder: tets whose centroid lies
/// within radius of the cube's vertical axis get phase tag 2 (yarn), the
/// rest phase tag 1 (matrix).
Mesh generate_embedded_cylinder_rve(const std::array<int, 3>& divisions,
                                    double radius);

} // namespace homog

#endif

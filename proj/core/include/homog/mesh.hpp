#ifndef HOMOG_MESH_HPP
#define HOMOG_MESH_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace homog {

/// 3-node triangle record of a named boundary face set.
struct Tri {
  std::array<int, 3> n;
};

/// 4-node tetrahedron with a material phase tag.
struct Tet {
  std::array<int, 4> n;
  int phase = 0;
};

/// Tetrahedral volume mesh with phase-tagged elements and named boundary
/// face sets. Immutable after construction/validation; concurrent reads are
/// safe.
///
/// Validation enforces: node indices in range and distinct per tet, positive
/// signed element volume, phase tags on every element, and every face-set
/// triangle an exterior face (a face of exactly one tet).
class Mesh {
public:
  std::vector<Eigen::Vector3d> nodes;
  std::vector<Tet> tets;
  std::map<std::string, std::vector<Tri>> boundary_faces;
  /// Optional names for phase tags (from $PhysicalNames when present).
  std::map<int, std::string> phase_names;

  /// Throws ValidationError naming the offending element/face on failure.
  /// Also builds the exterior-face and adjacency tables below.
  void validate();

  Eigen::AlignedBox3d bounding_box() const;
  double volume() const;
  double tet_volume(int e) const;
  Eigen::Vector3d centroid(int e) const;

  /// All exterior faces (faces referenced by exactly one tet), with the
  /// adjacent tet index. Available after validate().
  struct ExteriorFace {
    std::array<int, 3> n; ///< oriented so the normal points outward
    int tet;
  };
  const std::vector<ExteriorFace>& exterior_faces() const { return exterior_; }

  /// tet adjacent to a face-set triangle; -1 when the tri set is unknown.
  int face_set_tet(const std::string& set, std::size_t tri_index) const;

  /// Sorted list of distinct phase tags.
  std::vector<int> phases() const;

  bool validated() const { return validated_; }

private:
  std::vector<ExteriorFace> exterior_;
  // per face set: adjacent tet per triangle (parallel to boundary_faces)
  std::map<std::string, std::vector<int>> face_set_tets_;
  bool validated_ = false;
};

/// Periodic node pairing: (plus, minus, axis) with y(plus) = y(minus) + L*e_axis.
struct PeriodicPair {
  int plus;
  int minus;
  int axis;
};

struct PeriodicPairing {
  std::vector<PeriodicPair> pairs;
  double tolerance = 0.0;

  /// plus node for (minus, axis), or -1.
  int plus_of(int minus, int axis) const;
  bool empty() const { return pairs.empty(); }
};

/// Pairs every boundary node on face y_i = min with its partner on y_i = max,
/// per axis, matching the other two coordinates within tolerance.
/// tolerance <= 0 selects the default 1e-8 * bounding-box diagonal.
/// Throws PairingError listing unmatched nodes.
PeriodicPairing detect_periodic_pairs(const Mesh& mesh, double tolerance = 0.0);

} // namespace homog

#endif

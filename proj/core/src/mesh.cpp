#include "homog/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <unordered_map>

#include "homog/errors.hpp"

namespace homog {

namespace {

// Key for an unoriented triangle face.
struct FaceKey {
  std::array<int, 3> s;
  bool operator==(const FaceKey&) const = default;
};

struct FaceKeyHash {
  std::size_t operator()(const FaceKey& k) const {
    std::size_t h = 1469598103934665603ull;
    for (int v : k.s) {
      h ^= static_cast<std::size_t>(v);
      h *= 1099511628211ull;
    }
    return h;
  }
};

FaceKey face_key(int a, int b, int c) {
  std::array<int, 3> s{a, b, c};
  std::sort(s.begin(), s.end());
  return FaceKey{s};
}

// Local faces of a tet (n0,n1,n2,n3), oriented outward for a
// positively-oriented element.
constexpr std::array<std::array<int, 3>, 4> kTetFaces = {{
    {1, 2, 3},
    {0, 3, 2},
    {0, 1, 3},
    {0, 2, 1},
}};

} // namespace

double Mesh::tet_volume(int e) const {
  const Tet& t = tets[static_cast<std::size_t>(e)];
  const Eigen::Vector3d& a = nodes[static_cast<std::size_t>(t.n[0])];
  Eigen::Vector3d d1 = nodes[static_cast<std::size_t>(t.n[1])] - a;
  Eigen::Vector3d d2 = nodes[static_cast<std::size_t>(t.n[2])] - a;
  Eigen::Vector3d d3 = nodes[static_cast<std::size_t>(t.n[3])] - a;
  return d1.cross(d2).dot(d3) / 6.0;
}

Eigen::Vector3d Mesh::centroid(int e) const {
  const Tet& t = tets[static_cast<std::size_t>(e)];
  Eigen::Vector3d c = Eigen::Vector3d::Zero();
  for (int v : t.n) c += nodes[static_cast<std::size_t>(v)];
  return c / 4.0;
}

double Mesh::volume() const {
  double v = 0.0;
  for (int e = 0; e < static_cast<int>(tets.size()); ++e) v += tet_volume(e);
  return v;
}

Eigen::AlignedBox3d Mesh::bounding_box() const {
  Eigen::AlignedBox3d box;
  for (const auto& p : nodes) box.extend(p);
  return box;
}

std::vector<int> Mesh::phases() const {
  std::set<int> tags;
  for (const Tet& t : tets) tags.insert(t.phase);
  return {tags.begin(), tags.end()};
}

void Mesh::validate() {
  const int nn = static_cast<int>(nodes.size());
  for (std::size_t e = 0; e < tets.size(); ++e) {
    const Tet& t = tets[e];
    for (int v : t.n) {
      if (v < 0 || v >= nn) {
        std::ostringstream os;
        os << "tet " << e << " references node " << v << " of " << nn;
        throw ValidationError(os.str());
      }
    }
    for (int i = 0; i < 4; ++i)
      for (int j = i + 1; j < 4; ++j)
        if (t.n[i] == t.n[j]) {
          std::ostringstream os;
          os << "tet " << e << " has repeated node " << t.n[i];
          throw ValidationError(os.str());
        }
    if (tet_volume(static_cast<int>(e)) <= 0.0) {
      std::ostringstream os;
      os << "tet " << e << " has non-positive volume "
         << tet_volume(static_cast<int>(e));
      throw ValidationError(os.str());
    }
  }

  // Exterior faces: faces referenced by exactly one tet.
  std::unordered_map<FaceKey, std::pair<int, int>, FaceKeyHash> count;
  count.reserve(tets.size() * 4);
  for (int e = 0; e < static_cast<int>(tets.size()); ++e) {
    const Tet& t = tets[static_cast<std::size_t>(e)];
    for (const auto& f : kTetFaces) {
      FaceKey k = face_key(t.n[f[0]], t.n[f[1]], t.n[f[2]]);
      auto [it, inserted] = count.try_emplace(k, std::make_pair(1, e));
      if (!inserted) it->second.first += 1;
    }
  }
  exterior_.clear();
  for (int e = 0; e < static_cast<int>(tets.size()); ++e) {
    const Tet& t = tets[static_cast<std::size_t>(e)];
    for (const auto& f : kTetFaces) {
      std::array<int, 3> tri{t.n[f[0]], t.n[f[1]], t.n[f[2]]};
      auto it = count.find(face_key(tri[0], tri[1], tri[2]));
      if (it->second.first == 1) exterior_.push_back({tri, e});
    }
  }

  // Every face-set triangle must be an exterior face of exactly one tet.
  face_set_tets_.clear();
  for (const auto& [name, tris] : boundary_faces) {
    std::vector<int>& adj = face_set_tets_[name];
    adj.reserve(tris.size());
    for (std::size_t i = 0; i < tris.size(); ++i) {
      const Tri& tri = tris[i];
      for (int v : tri.n) {
        if (v < 0 || v >= nn) {
          std::ostringstream os;
          os << "face set '" << name << "' triangle " << i
             << " references node " << v << " of " << nn;
          throw ValidationError(os.str());
        }
      }
      auto it = count.find(face_key(tri.n[0], tri.n[1], tri.n[2]));
      if (it == count.end() || it->second.first != 1) {
        std::ostringstream os;
        os << "face set '" << name << "' triangle " << i
           << " is not an exterior face of exactly one tet";
        throw ValidationError(os.str());
      }
      adj.push_back(it->second.second);
    }
  }
  validated_ = true;
}

int Mesh::face_set_tet(const std::string& set, std::size_t tri_index) const {
  auto it = face_set_tets_.find(set);
  if (it == face_set_tets_.end() || tri_index >= it->second.size()) return -1;
  return it->second[tri_index];
}

int PeriodicPairing::plus_of(int minus, int axis) const {
  for (const PeriodicPair& p : pairs)
    if (p.minus == minus && p.axis == axis) return p.plus;
  return -1;
}

PeriodicPairing detect_periodic_pairs(const Mesh& mesh, double tolerance) {
  const Eigen::AlignedBox3d box = mesh.bounding_box();
  if (tolerance <= 0.0) tolerance = 1e-8 * box.diagonal().norm();

  // Boundary nodes from exterior faces (mesh must be validated); fall back to
  // all nodes for meshes validated lazily by callers.
  std::set<int> boundary;
  if (mesh.validated()) {
    for (const auto& f : mesh.exterior_faces())
      for (int v : f.n) boundary.insert(v);
  } else {
    for (int v = 0; v < static_cast<int>(mesh.nodes.size()); ++v)
      boundary.insert(v);
  }

  PeriodicPairing pairing;
  pairing.tolerance = tolerance;
  std::vector<int> unmatched;

  for (int axis = 0; axis < 3; ++axis) {
    const double lo = box.min()[axis];
    const double hi = box.max()[axis];
    if (hi - lo <= tolerance) continue;
    std::vector<int> minus, plus;
    for (int v : boundary) {
      const double x = mesh.nodes[static_cast<std::size_t>(v)][axis];
      if (std::abs(x - lo) <= tolerance) minus.push_back(v);
      if (std::abs(x - hi) <= tolerance) plus.push_back(v);
    }
    const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
    auto lex = [&](int u, int w) {
      const auto& pu = mesh.nodes[static_cast<std::size_t>(u)];
      const auto& pw = mesh.nodes[static_cast<std::size_t>(w)];
      if (pu[a1] != pw[a1]) return pu[a1] < pw[a1];
      return pu[a2] < pw[a2];
    };
    std::sort(minus.begin(), minus.end(), lex);
    std::sort(plus.begin(), plus.end(), lex);

    std::vector<bool> used(plus.size(), false);
    for (int m : minus) {
      const auto& pm = mesh.nodes[static_cast<std::size_t>(m)];
      int found = -1;
      // Window scan over candidates ordered by (a1, a2).
      for (std::size_t j = 0; j < plus.size(); ++j) {
        if (used[j]) continue;
        const auto& pp = mesh.nodes[static_cast<std::size_t>(plus[j])];
        if (pp[a1] < pm[a1] - tolerance) continue;
        if (pp[a1] > pm[a1] + tolerance) break;
        if (std::abs(pp[a2] - pm[a2]) <= tolerance) {
          found = static_cast<int>(j);
          break;
        }
      }
      if (found < 0) {
        unmatched.push_back(m);
      } else {
        used[static_cast<std::size_t>(found)] = true;
        pairing.pairs.push_back({plus[static_cast<std::size_t>(found)], m, axis});
      }
    }
    for (std::size_t j = 0; j < plus.size(); ++j)
      if (!used[j]) unmatched.push_back(plus[j]);
  }

  if (!unmatched.empty()) {
    std::sort(unmatched.begin(), unmatched.end());
    unmatched.erase(std::unique(unmatched.begin(), unmatched.end()),
                    unmatched.end());
    std::ostringstream os;
    os << "periodic pairing failed, " << unmatched.size()
       << " unmatched boundary node(s):";
    for (std::size_t i = 0; i < unmatched.size() && i < 20; ++i)
      os << " " << unmatched[i];
    if (unmatched.size() > 20) os << " ...";
    throw PairingError(os.str());
  }
  return pairing;
}

} // namespace homog

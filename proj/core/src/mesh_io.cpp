#include "homog/mesh_io.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>
#include <unordered_map>

#include "homog/errors.hpp"

namespace homog {

namespace {

struct LineReader {
  std::istream& in;
  std::string label;
  int line_no = 0;

  bool next(std::string& line) {
    while (std::getline(in, line)) {
      ++line_no;
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (!line.empty()) return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << label << ":" << line_no << ": " << msg;
    throw ParseError(os.str());
  }
};

std::string quoted_name(const std::string& s, LineReader& r) {
  auto a = s.find('"');
  auto b = s.rfind('"');
  if (a == std::string::npos || b <= a) r.fail("expected quoted name");
  return s.substr(a + 1, b - a - 1);
}

} // namespace

Mesh read_gmsh(std::istream& in, const std::string& label) {
  LineReader r{in, label};
  std::string line;
  Mesh mesh;
  std::map<int, std::string> surface_names; // physical tag -> set name
  std::unordered_map<long, int> node_index; // file node id -> index

  while (r.next(line)) {
    if (line == "$MeshFormat") {
      if (!r.next(line)) r.fail("unexpected end of file in $MeshFormat");
      std::istringstream os(line);
      double version = 0.0;
      int file_type = -1;
      os >> version >> file_type;
      if (!os || version < 2.0 || version >= 3.0 || file_type != 0)
        r.fail("unsupported mesh format (need ASCII v2.x)");
      if (!r.next(line) || line != "$EndMeshFormat")
        r.fail("missing $EndMeshFormat");
    } else if (line == "$PhysicalNames") {
      if (!r.next(line)) r.fail("unexpected end of file in $PhysicalNames");
      int count = 0;
      if (std::from_chars(line.data(), line.data() + line.size(), count).ec !=
          std::errc{})
        r.fail("malformed $PhysicalNames count");
      for (int i = 0; i < count; ++i) {
        if (!r.next(line)) r.fail("unexpected end of file in $PhysicalNames");
        std::istringstream os(line);
        int dim = 0, tag = 0;
        os >> dim >> tag;
        if (!os) r.fail("malformed physical name record");
        const std::string name = quoted_name(line, r);
        if (dim == 2)
          surface_names[tag] = name;
        else if (dim == 3)
          mesh.phase_names[tag] = name;
      }
      if (!r.next(line) || line != "$EndPhysicalNames")
        r.fail("missing $EndPhysicalNames");
    } else if (line == "$Nodes") {
      if (!r.next(line)) r.fail("unexpected end of file in $Nodes");
      long count = 0;
      {
        std::istringstream os(line);
        os >> count;
        if (!os || count < 0) r.fail("malformed node count");
      }
      mesh.nodes.reserve(static_cast<std::size_t>(count));
      for (long i = 0; i < count; ++i) {
        if (!r.next(line)) r.fail("unexpected end of file in $Nodes");
        std::istringstream os(line);
        long id = 0;
        double x = 0, y = 0, z = 0;
        os >> id >> x >> y >> z;
        if (!os) r.fail("malformed node line");
        if (!node_index.emplace(id, static_cast<int>(mesh.nodes.size())).second)
          r.fail("duplicate node id");
        mesh.nodes.emplace_back(x, y, z);
      }
      if (!r.next(line) || line != "$EndNodes") r.fail("missing $EndNodes");
    } else if (line == "$Elements") {
      if (!r.next(line)) r.fail("unexpected end of file in $Elements");
      long count = 0;
      {
        std::istringstream os(line);
        os >> count;
        if (!os || count < 0) r.fail("malformed element count");
      }
      for (long i = 0; i < count; ++i) {
        if (!r.next(line)) r.fail("unexpected end of file in $Elements");
        std::istringstream os(line);
        long id = 0;
        int type = 0, ntags = 0;
        os >> id >> type >> ntags;
        if (!os) r.fail("malformed element line");
        int physical = 0;
        for (int t = 0; t < ntags; ++t) {
          int tag = 0;
          os >> tag;
          if (!os) r.fail("malformed element tags");
          if (t == 0) physical = tag;
        }
        auto read_node = [&]() {
          long nid = 0;
          os >> nid;
          if (!os) r.fail("malformed element connectivity");
          auto it = node_index.find(nid);
          if (it == node_index.end()) {
            std::ostringstream msg;
            msg << "element " << id << " references unknown node " << nid;
            r.fail(msg.str());
          }
          return it->second;
        };
        if (type == 4) { // 4-node tetrahedron
          Tet t;
          for (int v = 0; v < 4; ++v) t.n[static_cast<std::size_t>(v)] = read_node();
          t.phase = physical;
          mesh.tets.push_back(t);
        } else if (type == 2) { // 3-node triangle
          Tri tri;
          for (int v = 0; v < 3; ++v) tri.n[static_cast<std::size_t>(v)] = read_node();
          auto it = surface_names.find(physical);
          const std::string name = it != surface_names.end()
                                       ? it->second
                                       : "surface_" + std::to_string(physical);
          mesh.boundary_faces[name].push_back(tri);
        } else if (type == 15 || type == 1) {
          // points/lines: irrelevant here, skip
        } else {
          std::ostringstream msg;
          msg << "unsupported element type " << type;
          r.fail(msg.str());
        }
      }
      if (!r.next(line) || line != "$EndElements")
        r.fail("missing $EndElements");
    } else if (line.rfind("$", 0) == 0) {
      // Skip unknown sections.
      const std::string end = "$End" + line.substr(1);
      bool closed = false;
      while (r.next(line)) {
        if (line == end) {
          closed = true;
          break;
        }
      }
      if (!closed) r.fail("unterminated section");
    } else {
      r.fail("unexpected content outside a section");
    }
  }

  if (mesh.nodes.empty()) throw ParseError(label + ": no $Nodes section");
  if (mesh.tets.empty()) throw ParseError(label + ": no tetrahedra found");
  mesh.validate();
  return mesh;
}

Mesh read_gmsh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open mesh file '" + path + "'");
  return read_gmsh(in, path);
}

void write_gmsh(const Mesh& mesh, std::ostream& out) {
  out << "$MeshFormat\n2.2 0 8\n$EndMeshFormat\n";

  // Physical names: volumes from phase_names, surfaces from set order.
  std::map<std::string, int> surface_tags;
  int next_tag = 0;
  for (const auto& t : mesh.tets) next_tag = std::max(next_tag, t.phase);
  for (const auto& [tag, name] : mesh.phase_names)
    next_tag = std::max(next_tag, tag);
  for (const auto& [name, tris] : mesh.boundary_faces)
    surface_tags[name] = ++next_tag;

  if (!mesh.phase_names.empty() || !surface_tags.empty()) {
    out << "$PhysicalNames\n"
        << mesh.phase_names.size() + surface_tags.size() << "\n";
    for (const auto& [name, tag] : surface_tags)
      out << "2 " << tag << " \"" << name << "\"\n";
    for (const auto& [tag, name] : mesh.phase_names)
      out << "3 " << tag << " \"" << name << "\"\n";
    out << "$EndPhysicalNames\n";
  }

  out << "$Nodes\n" << mesh.nodes.size() << "\n";
  char buf[96];
  for (std::size_t i = 0; i < mesh.nodes.size(); ++i) {
    const auto& p = mesh.nodes[i];
    std::snprintf(buf, sizeof(buf), "%zu %.17g %.17g %.17g", i + 1, p.x(),
                  p.y(), p.z());
    out << buf << "\n";
  }
  out << "$EndNodes\n";

  std::size_t n_elems = mesh.tets.size();
  for (const auto& [name, tris] : mesh.boundary_faces) n_elems += tris.size();
  out << "$Elements\n" << n_elems << "\n";
  std::size_t eid = 0;
  for (const auto& [name, tris] : mesh.boundary_faces) {
    const int tag = surface_tags[name];
    for (const Tri& t : tris)
      out << ++eid << " 2 2 " << tag << " " << tag << " " << t.n[0] + 1 << " "
          << t.n[1] + 1 << " " << t.n[2] + 1 << "\n";
  }
  for (const Tet& t : mesh.tets)
    out << ++eid << " 4 2 " << t.phase << " " << t.phase << " " << t.n[0] + 1
        << " " << t.n[1] + 1 << " " << t.n[2] + 1 << " " << t.n[3] + 1 << "\n";
  out << "$EndElements\n";
}

void write_gmsh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_gmsh(mesh, out);
  if (!out) throw Error("write failed for '" + path + "'");
}

} // namespace homog

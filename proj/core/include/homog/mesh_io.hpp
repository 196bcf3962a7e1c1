#ifndef HOMOG_MESH_IO_HPP
#define HOMOG_MESH_IO_HPP

#include <iosfwd>
#include <string>

#include "homog/mesh.hpp"

namespace homog {

/// Reads a Gmsh ASCII v2.2 file (subset: $MeshFormat, optional
/// $PhysicalNames, $Nodes, $Elements). Volume elements must be 4-node tets
/// (type 4); their first physical tag is the phase. 3-node triangles (type 2)
/// are collected into boundary face sets named by their physical group.
/// The returned mesh is validated.
Mesh read_gmsh(const std::string& path);
Mesh read_gmsh(std::istream& in, const std::string& label = "<stream>");

/// Writes the same subset back out. Coordinates are printed with 17
/// significant digits so a read/write round trip reproduces them bit-exactly.
void write_gmsh(const Mesh& mesh, const std::string& path);
void write_gmsh(const Mesh& mesh, std::ostream& out);

} // namespace homog

#endif

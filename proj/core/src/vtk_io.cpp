#include "homog/vtk_io.hpp"

#include <fstream>

#include "homog/errors.hpp"

namespace homog {

namespace {
void check_size(const std::string& name, Eigen::Index have, std::size_t want) {
  if (have != static_cast<Eigen::Index>(want))
    throw ValidationError("VTK field '" + name + "' has " +
                          std::to_string(have) + " entries, expected " +
                          std::to_string(want));
}
} // namespace

void VtkWriter::add_point_scalar(const std::string& name,
                                 const Eigen::VectorXd& v) {
  check_size(name, v.size(), mesh_.nodes.size());
  point_scalars_.emplace_back(name, v);
}

void VtkWriter::add_point_vector(const std::string& name,
                                 const Eigen::MatrixX3d& v) {
  check_size(name, v.rows(), mesh_.nodes.size());
  point_vectors_.emplace_back(name, v);
}

void VtkWriter::add_cell_scalar(const std::string& name,
                                const Eigen::VectorXd& v) {
  check_size(name, v.size(), mesh_.tets.size());
  cell_scalars_.emplace_back(name, v);
}

void VtkWriter::add_cell_vector(const std::string& name,
                                const Eigen::MatrixX3d& v) {
  check_size(name, v.rows(), mesh_.tets.size());
  cell_vectors_.emplace_back(name, v);
}

void VtkWriter::write(const std::string& path, const std::string& title) const {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");

  out << "# vtk DataFile Version 2.0\n" << title << "\nASCII\n";
  out << "DATASET UNSTRUCTURED_GRID\n";

  out << "POINTS " << mesh_.nodes.size() << " double\n";
  for (const auto& p : mesh_.nodes)
    out << p.x() << " " << p.y() << " " << p.z() << "\n";

  out << "CELLS " << mesh_.tets.size() << " " << mesh_.tets.size() * 5 << "\n";
  for (const Tet& t : mesh_.tets)
    out << "4 " << t.n[0] << " " << t.n[1] << " " << t.n[2] << " " << t.n[3]
        << "\n";
  out << "CELL_TYPES " << mesh_.tets.size() << "\n";
  for (std::size_t i = 0; i < mesh_.tets.size(); ++i) out << "10\n";

  if (!point_scalars_.empty() || !point_vectors_.empty()) {
    out << "POINT_DATA " << mesh_.nodes.size() << "\n";
    for (const auto& [name, v] : point_scalars_) {
      out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
      for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << "\n";
    }
    for (const auto& [name, v] : point_vectors_) {
      out << "VECTORS " << name << " double\n";
      for (Eigen::Index i = 0; i < v.rows(); ++i)
        out << v(i, 0) << " " << v(i, 1) << " " << v(i, 2) << "\n";
    }
  }

  out << "CELL_DATA " << mesh_.tets.size() << "\n";
  out << "SCALARS phase int 1\nLOOKUP_TABLE default\n";
  for (const Tet& t : mesh_.tets) out << t.phase << "\n";
  for (const auto& [name, v] : cell_scalars_) {
    out << "SCALARS " << name << " double 1\nLOOKUP_TABLE default\n";
    for (Eigen::Index i = 0; i < v.size(); ++i) out << v[i] << "\n";
  }
  for (const auto& [name, v] : cell_vectors_) {
    out << "VECTORS " << name << " double\n";
    for (Eigen::Index i = 0; i < v.rows(); ++i)
      out << v(i, 0) << " " << v(i, 1) << " " << v(i, 2) << "\n";
  }
  if (!out) throw Error("write failed for '" + path + "'");
}

} // namespace homog

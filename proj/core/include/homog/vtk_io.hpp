#ifndef HOMOG_VTK_IO_HPP
#define HOMOG_VTK_IO_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "homog/mesh.hpp"

namespace homog {

/// Legacy-ASCII VTK unstructured-grid writer for visual inspection.
/// Nodal fields have one value (or 3-vector) per mesh node; cell fields one
/// value per tet. The phase tag is always written as cell data.
class VtkWriter {
public:
  explicit VtkWriter(const Mesh& mesh) : mesh_(mesh) {}

  void add_point_scalar(const std::string& name, const Eigen::VectorXd& v);
  void add_point_vector(const std::string& name, const Eigen::MatrixX3d& v);
  void add_cell_scalar(const std::string& name, const Eigen::VectorXd& v);
  void add_cell_vector(const std::string& name, const Eigen::MatrixX3d& v);

  void write(const std::string& path, const std::string& title = "homog") const;

private:
  const Mesh& mesh_;
  std::vector<std::pair<std::string, Eigen::VectorXd>> point_scalars_;
  std::vector<std::pair<std::string, Eigen::MatrixX3d>> point_vectors_;
  std::vector<std::pair<std::string, Eigen::VectorXd>> cell_scalars_;
  std::vector<std::pair<std::string, Eigen::MatrixX3d>> cell_vectors_;
};

} // namespace homog

#endif

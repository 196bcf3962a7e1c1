#ifndef HOMOG_BC_HPP
#define HOMOG_BC_HPP

#include <optional>
#include <string>
#include <vector>

#include "homog/saddle.hpp"

namespace homog {

/// Prescribed scalar value on a named face set.
struct FixedValueBc {
  std::string face_set;
  double value = 0.0;
};

/// Prescribed displacement components on a named face set; unset components
/// stay free.
struct FixedDisplacementBc {
  std::string face_set;
  std::array<std::optional<double>, 3> value;
};

/// Unit-selector constraint rows pinning the dofs of the given face sets to
/// constant values (vertex dofs take the value, hierarchic edge dofs zero).
/// When a dof appears in several sets the first set listed wins.
ConstraintSet scalar_fixed_value_constraints(
    const FeSpace& space, const std::vector<FixedValueBc>& bcs);

ConstraintSet displacement_constraints(
    const FeSpace& space, const std::vector<FixedDisplacementBc>& bcs);

/// Node ids referenced by a face set (vertices only).
std::vector<int> face_set_nodes(const Mesh& mesh, const std::string& set);

} // namespace homog

#endif

#ifndef HOMOG_CONFIG_HPP
#define HOMOG_CONFIG_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "homog/bc.hpp"
#include "homog/materials.hpp"
#include "homog/rve.hpp"
#include "homog/transient.hpp"

namespace homog {

/// Per-phase material block of a run configuration. Mechanical phases carry
/// either an isotropic or a transversely isotropic model; yarn orientation
/// comes from a fixed axis or a potential-flow spec (inlet/outlet face sets).
struct PhaseMaterialConfig {
  int tag = 0;
  std::string name;
  bool is_matrix = false; ///< degradation applies to this phase

  std::optional<IsotropicElastic> isotropic;
  std::optional<TransverselyIsotropic> transversely_isotropic;
  std::optional<Eigen::Vector3d> axis;
  struct FlowSpec {
    std::string inlet;
    std::string outlet;
  };
  std::optional<FlowSpec> flow;

  std::optional<double> thermal_conductivity;
  std::optional<double> rho_cp;
  std::optional<double> moisture_diffusivity;
};

struct HomogenizeConfig {
  std::string mesh;
  int order = 2;
  BcKind bc = BcKind::Periodic;
  std::string physics = "mech"; ///< mech | thermal | moisture
  std::vector<PhaseMaterialConfig> phases;
  double one_minus_omega = 1.0;
  std::string report_path;
  std::string vtk_path;
};

struct TransientCliConfig {
  std::string mesh;
  int order = 1;
  std::string physics = "thermal"; ///< field label
  Eigen::Matrix3d conductivity = Eigen::Matrix3d::Identity();
  double rho_cp = 1.0;
  double initial_value = 0.0;
  std::vector<FixedValueBc> fixed_values;
  std::vector<SurfaceFluxBc> fluxes;
  double dt = 0.0;
  double t_end = 0.0;
  int snapshot_stride = 0;
  std::vector<Probe> probes;
  std::string output_dir;
  double steady_rel_tol = 1e-8;
  bool stop_at_steady = false;
};

struct DirectionsConfig {
  std::string mesh;
  struct YarnSpec {
    int phase = 0;
    std::string inlet;
    std::string outlet;
  };
  std::vector<YarnSpec> yarns;
  std::string vtk_path;
};

struct Fe2Config {
  // Macro problem.
  std::string macro_mesh;
  int macro_order = 1;
  double macro_rho_cp = 1.0;
  double seconds_per_day = 86400.0;

  // RVEs (may repeat the same mesh file).
  BcKind rve_bc = BcKind::Periodic;
  int rve_order = 2;
  std::string thermal_rve_mesh;
  std::string moisture_rve_mesh;
  std::string mech_rve_mesh;
  std::vector<PhaseMaterialConfig> phases; ///< shared phase table

  // Macro transport boundary conditions. Temperatures in kelvin,
  // concentrations in [0, 1]; schedule in days (thermal conductivities are
  // per second and scaled by seconds_per_day).
  double thermal_initial = 293.15;
  std::vector<FixedValueBc> thermal_fixed;
  std::vector<SurfaceFluxBc> thermal_flux;
  double moisture_initial = 0.0;
  std::vector<FixedValueBc> moisture_fixed;
  std::vector<SurfaceFluxBc> moisture_flux;

  // Macro mechanics.
  bool mechanical_stage = true;
  std::vector<FixedDisplacementBc> mech_fixed;
  struct TractionBc {
    std::string face_set;
    Eigen::Vector3d traction = Eigen::Vector3d::Zero();
  };
  std::vector<TractionBc> tractions;

  // Degradation constants.
  double beta = 0.0;
  double tg_kelvin = 0.0;
  double g0 = 0.0;

  // Schedule.
  double dt_days = 0.0;
  double t_end_days = 0.0;
  int snapshot_stride = 0;
  double cache_resolution = 1e-3;
  std::vector<Probe> probes;
  std::string output_dir;
  int threads = 0;
};

/// Parsers reject unknown keys and enumerate every schema violation in one
/// ConfigError.
HomogenizeConfig parse_homogenize_config(const std::string& path);
TransientCliConfig parse_transient_config(const std::string& path);
DirectionsConfig parse_directions_config(const std::string& path);
Fe2Config parse_fe2_config(const std::string& path);

} // namespace homog

#endif

#ifndef HOMOG_DEGRADATION_HPP
#define HOMOG_DEGRADATION_HPP

#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "homog/fe.hpp"

namespace homog {

inline double kelvin_from_celsius(double c) { return c + 273.15; }

/// Stiffness-vs-time samples recorded at one exposure temperature.
struct ExperimentSeries {
  double exposure_temp_celsius = 0.0;
  std::vector<std::pair<double, double>> samples; ///< (time days, G GPa)

  /// Times nonnegative, strictly increasing; G positive.
  void validate() const;
};

/// CSV with header temperature_C,time_days,G_GPa; rows grouped by
/// temperature, ordered as encountered.
std::vector<ExperimentSeries> read_experiment_csv(const std::string& path);

struct AlphaFit {
  double alpha = 0.0;
  double residual = 0.0; ///< sum of squared misfits at the optimum
};

/// Least-squares decay constant of G0 * exp(-alpha t) with G0 held fixed;
/// 1D minimisation via derivative bisection. Throws FittingError with the
/// bracket when no sign change is found.
AlphaFit fit_alpha(const ExperimentSeries& series, double g0);

struct BetaFit {
  double beta = 0.0;
  double residual = 0.0; ///< sum of squared alpha misfits
  std::map<double, double> log_terms; ///< temperature C -> ln(1 - T/Tg)
};

/// Closed-form least squares of alpha(T) = beta * ln(1 - T/Tg) over
/// (temperature C, alpha) pairs; temperatures enter in kelvin.
/// Throws DomainError when any exposure temperature reaches Tg.
BetaFit fit_beta(const std::map<double, double>& alpha_by_temp_celsius,
                 double tg_kelvin);

/// Fitted model constants. Tg is stored in kelvin; alpha values in 1/day.
struct DegradationParams {
  double g0 = 0.0;
  double tg_kelvin = 0.0;
  double beta = 0.0;
  std::map<double, double> alpha_by_temp_celsius;

  void validate() const;
};

/// Decay coefficient k = c * beta * ln(1 - T/Tg) of d(1-w)/dt = -k (1-w);
/// nonnegative for physical inputs (beta <= 0). T in kelvin, c clamped to
/// [0, 1] (the moisture factor saturates outside the calibrated range).
double damage_rate_coefficient(double t_kelvin, double c, double beta,
                               double tg_kelvin);

/// G(T, c, t) = G0 * exp(-c * beta * ln(1 - T/Tg) * t). T kelvin, t days.
/// Throws DomainError outside 0 <= c <= 1 or 0 < T < Tg.
double predict_G(const DegradationParams& params, double t_kelvin, double c,
                 double t_days);

/// Nodal damage field (1 - omega) on the macro mesh.
struct DamageField {
  Eigen::VectorXd values;
  double time_days = 0.0;
};

/// One backward-Euler step of the nodal damage ODE:
/// w_next = w / (1 + dt * k). Keeps w in (0, 1]. Nodal T in kelvin.
DamageField step_damage(const DamageField& field, const Eigen::VectorXd& t_kelvin,
                        const Eigen::VectorXd& c, double dt_days, double beta,
                        double tg_kelvin);

/// FE-projected residual of the damage evolution (consistent-mass form),
/// F = integral N^T (N Wdot + c beta ln(1 - N T / Tg) N W).
Eigen::VectorXd assemble_damage_residual(const FeSpace& space,
                                         const Eigen::VectorXd& w,
                                         const Eigen::VectorXd& w_dot,
                                         const Eigen::VectorXd& t_kelvin,
                                         const Eigen::VectorXd& c, double beta,
                                         double tg_kelvin);

/// Jacobian dF/dW + a * dF/dWdot (a = 1/dt for backward Euler):
/// J = integral N^T (c beta ln(1 - N T / Tg) + a) N.
Eigen::SparseMatrix<double> assemble_damage_jacobian(
    const FeSpace& space, const Eigen::VectorXd& t_kelvin,
    const Eigen::VectorXd& c, double beta, double tg_kelvin, double shift);

/// Text fit report: per-temperature alpha table, beta, residuals.
std::string fit_report(const std::vector<ExperimentSeries>& data, double g0,
                       double tg_celsius,
                       const std::map<double, double>& alphas,
                       const BetaFit& beta);

} // namespace homog

#endif

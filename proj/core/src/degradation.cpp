#include "homog/degradation.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "homog/errors.hpp"

namespace homog {

void ExperimentSeries::validate() const {
  if (samples.size() < 2)
    throw ValidationError("experiment series needs at least 2 samples");
  double prev = -1.0;
  for (const auto& [t, g] : samples) {
    if (t < 0.0) throw ValidationError("sample time must be nonnegative");
    if (t <= prev)
      throw ValidationError("sample times must be strictly increasing");
    if (!(g > 0.0)) throw ValidationError("shear modulus must be positive");
    prev = t;
  }
}

std::vector<ExperimentSeries> read_experiment_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open CSV '" + path + "'");
  std::string line;
  int line_no = 0;
  auto fail = [&](const std::string& msg) -> void {
    throw ParseError(path + ":" + std::to_string(line_no) + ": " + msg);
  };
  if (!std::getline(in, line)) fail("empty file");
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "temperature_C,time_days,G_GPa")
    fail("expected header 'temperature_C,time_days,G_GPa', got '" + line + "'");

  std::vector<ExperimentSeries> series;
  auto series_for = [&](double temp) -> ExperimentSeries& {
    for (auto& s : series)
      if (s.exposure_temp_celsius == temp) return s;
    series.push_back({temp, {}});
    return series.back();
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream os(line);
    double temp = 0, t = 0, g = 0;
    char c1 = 0, c2 = 0;
    os >> temp >> c1 >> t >> c2 >> g;
    if (!os || c1 != ',' || c2 != ',') fail("malformed CSV row '" + line + "'");
    series_for(temp).samples.emplace_back(t, g);
  }
  if (series.empty()) throw ParseError(path + ": no data rows");
  for (const auto& s : series) s.validate();
  return series;
}

AlphaFit fit_alpha(const ExperimentSeries& series, double g0) {
  series.validate();
  if (!(g0 > 0.0)) throw ValidationError("G0 must be positive");

  auto objective = [&](double alpha) {
    double f = 0.0;
    for (const auto& [t, g] : series.samples) {
      const double r = g - g0 * std::exp(-alpha * t);
      f += r * r;
    }
    return f;
  };
  auto slope = [&](double alpha) {
    double d = 0.0;
    for (const auto& [t, g] : series.samples) {
      const double m = g0 * std::exp(-alpha * t);
      d += 2.0 * (g - m) * m * t;
    }
    return d;
  };

  AlphaFit fit;
  if (slope(0.0) >= 0.0) {
    // Non-decaying data: the constrained optimum sits at alpha = 0.
    fit.alpha = 0.0;
    fit.residual = objective(0.0);
    return fit;
  }
  double lo = 0.0, hi = 1e-6;
  while (slope(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e6) {
      std::ostringstream os;
      os << "alpha fit failed to bracket a minimum: dF/dalpha < 0 on [" << lo
         << ", " << hi << "]";
      throw FittingError(os.str());
    }
  }
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * hi; ++it) {
    const double mid = 0.5 * (lo + hi);
    (slope(mid) < 0.0 ? lo : hi) = mid;
  }
  fit.alpha = 0.5 * (lo + hi);
  fit.residual = objective(fit.alpha);
  return fit;
}

namespace {

double log_term(double t_kelvin, double tg_kelvin) {
  if (!(tg_kelvin > 0.0)) throw DomainError("Tg must be positive (kelvin)");
  if (!(t_kelvin > 0.0))
    throw DomainError("temperature must be positive (kelvin), got " +
                      std::to_string(t_kelvin));
  if (!(t_kelvin < tg_kelvin))
    throw DomainError("temperature " + std::to_string(t_kelvin) +
                      " K reaches the glass transition " +
                      std::to_string(tg_kelvin) + " K");
  return std::log(1.0 - t_kelvin / tg_kelvin);
}

} // namespace

BetaFit fit_beta(const std::map<double, double>& alpha_by_temp_celsius,
                 double tg_kelvin) {
  if (alpha_by_temp_celsius.empty())
    throw ValidationError("beta fit needs at least one (T, alpha) pair");
  BetaFit fit;
  double num = 0.0, den = 0.0;
  for (const auto& [temp_c, alpha] : alpha_by_temp_celsius) {
    const double L = log_term(kelvin_from_celsius(temp_c), tg_kelvin);
    fit.log_terms[temp_c] = L;
    num += alpha * L;
    den += L * L;
  }
  fit.beta = num / den;
  for (const auto& [temp_c, alpha] : alpha_by_temp_celsius) {
    const double r = alpha - fit.beta * fit.log_terms[temp_c];
    fit.residual += r * r;
  }
  return fit;
}

void DegradationParams::validate() const {
  if (!(g0 > 0.0)) throw ValidationError("G0 must be positive");
  if (!(tg_kelvin > 0.0)) throw ValidationError("Tg must be positive");
  for (const auto& [temp_c, alpha] : alpha_by_temp_celsius) {
    if (!(kelvin_from_celsius(temp_c) < tg_kelvin))
      throw ValidationError("exposure temperature reaches Tg");
    if (!(alpha >= 0.0)) throw ValidationError("alpha must be nonnegative");
  }
}

double damage_rate_coefficient(double t_kelvin, double c, double beta,
                               double tg_kelvin) {
  const double cc = std::clamp(c, 0.0, 1.0);
  const double k = cc * beta * log_term(t_kelvin, tg_kelvin);
  if (k < 0.0)
    throw DomainError("degradation rate is negative (beta and ln(1-T/Tg) "
                      "disagree in sign); beta should be <= 0");
  return k;
}

double predict_G(const DegradationParams& params, double t_kelvin, double c,
                 double t_days) {
  params.validate();
  if (!(c >= 0.0 && c <= 1.0))
    throw DomainError("moisture concentration " + std::to_string(c) +
                      " outside [0, 1]");
  if (t_days < 0.0) throw DomainError("time must be nonnegative");
  const double k = damage_rate_coefficient(t_kelvin, c, params.beta,
                                           params.tg_kelvin);
  return params.g0 * std::exp(-k * t_days);
}

DamageField step_damage(const DamageField& field,
                        const Eigen::VectorXd& t_kelvin,
                        const Eigen::VectorXd& c, double dt_days, double beta,
                        double tg_kelvin) {
  if (!(dt_days > 0.0)) throw ValidationError("dt must be positive");
  if (t_kelvin.size() != field.values.size() || c.size() != field.values.size())
    throw ValidationError("nodal field size mismatch in damage step");
  DamageField next;
  next.time_days = field.time_days + dt_days;
  next.values.resize(field.values.size());
  for (Eigen::Index i = 0; i < field.values.size(); ++i) {
    const double k = damage_rate_coefficient(t_kelvin[i], c[i], beta, tg_kelvin);
    const double denom = 1.0 + dt_days * k;
    if (!(denom > 0.0))
      throw DomainError("nonpositive backward-Euler denominator at node " +
                        std::to_string(i));
    next.values[i] = field.values[i] / denom;
  }
  return next;
}

Eigen::VectorXd assemble_damage_residual(const FeSpace& space,
                                         const Eigen::VectorXd& w,
                                         const Eigen::VectorXd& w_dot,
                                         const Eigen::VectorXd& t_kelvin,
                                         const Eigen::VectorXd& c, double beta,
                                         double tg_kelvin) {
  const int n = space.dof_count();
  if (w.size() != n || w_dot.size() != n || t_kelvin.size() != n ||
      c.size() != n)
    throw ValidationError("nodal vector size mismatch in damage residual");
  Eigen::VectorXd f = Eigen::VectorXd::Zero(n);
  const TetQuadrature& rule = tet_quadrature_for_order(space.order());
  std::vector<int> dofs;
  for (int e = 0; e < static_cast<int>(space.mesh().tets.size()); ++e) {
    const FeSpace::ElementBasis eb = space.tabulate(e, rule);
    space.element_dofs(e, dofs);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double wq = rule.weights[k] * eb.volume;
      double wv = 0.0, wd = 0.0, tv = 0.0, cv = 0.0;
      for (std::size_t a = 0; a < dofs.size(); ++a) {
        const double na = eb.N(static_cast<Eigen::Index>(k),
                               static_cast<Eigen::Index>(a));
        wv += na * w[dofs[a]];
        wd += na * w_dot[dofs[a]];
        tv += na * t_kelvin[dofs[a]];
        cv += na * c[dofs[a]];
      }
      const double rate = std::clamp(cv, 0.0, 1.0) * beta *
                          log_term(tv, tg_kelvin);
      const double integrand = wd + rate * wv;
      for (std::size_t a = 0; a < dofs.size(); ++a)
        f[dofs[a]] += wq *
                      eb.N(static_cast<Eigen::Index>(k),
                           static_cast<Eigen::Index>(a)) *
                      integrand;
    }
  }
  return f;
}

Eigen::SparseMatrix<double> assemble_damage_jacobian(
    const FeSpace& space, const Eigen::VectorXd& t_kelvin,
    const Eigen::VectorXd& c, double beta, double tg_kelvin, double shift) {
  const int n = space.dof_count();
  if (t_kelvin.size() != n || c.size() != n)
    throw ValidationError("nodal vector size mismatch in damage jacobian");
  std::vector<Eigen::Triplet<double>> trips;
  const TetQuadrature& rule = tet_quadrature_for_order(space.order());
  std::vector<int> dofs;
  for (int e = 0; e < static_cast<int>(space.mesh().tets.size()); ++e) {
    const FeSpace::ElementBasis eb = space.tabulate(e, rule);
    space.element_dofs(e, dofs);
    for (std::size_t k = 0; k < rule.size(); ++k) {
      const double wq = rule.weights[k] * eb.volume;
      double tv = 0.0, cv = 0.0;
      for (std::size_t a = 0; a < dofs.size(); ++a) {
        const double na = eb.N(static_cast<Eigen::Index>(k),
                               static_cast<Eigen::Index>(a));
        tv += na * t_kelvin[dofs[a]];
        cv += na * c[dofs[a]];
      }
      const double coeff =
          std::clamp(cv, 0.0, 1.0) * beta * log_term(tv, tg_kelvin) + shift;
      for (std::size_t a = 0; a < dofs.size(); ++a)
        for (std::size_t b = 0; b < dofs.size(); ++b)
          trips.emplace_back(dofs[a], dofs[b],
                             wq * coeff *
                                 eb.N(static_cast<Eigen::Index>(k),
                                      static_cast<Eigen::Index>(a)) *
                                 eb.N(static_cast<Eigen::Index>(k),
                                      static_cast<Eigen::Index>(b)));
    }
  }
  Eigen::SparseMatrix<double> j(n, n);
  j.setFromTriplets(trips.begin(), trips.end());
  return j;
}

std::string fit_report(const std::vector<ExperimentSeries>& data, double g0,
                       double tg_celsius,
                       const std::map<double, double>& alphas,
                       const BetaFit& beta) {
  std::ostringstream os;
  char buf[64];
  os << "degradation fit report\n";
  std::snprintf(buf, sizeof(buf), "%.9g", g0);
  os << "G0 (GPa)        = " << buf << "\n";
  std::snprintf(buf, sizeof(buf), "%.9g", tg_celsius);
  os << "Tg (C)          = " << buf << "\n";
  os << "series: " << data.size() << "\n";
  for (const auto& [temp, alpha] : alphas) {
    std::snprintf(buf, sizeof(buf), "%9.4g C  alpha = %.9g 1/day", temp, alpha);
    os << "  " << buf;
    auto it = beta.log_terms.find(temp);
    if (it != beta.log_terms.end()) {
      std::snprintf(buf, sizeof(buf), "  ln(1-T/Tg) = %.9g", it->second);
      os << buf;
    }
    os << "\n";
  }
  std::snprintf(buf, sizeof(buf), "%.9g", beta.beta);
  os << "beta            = " << buf << " 1/day\n";
  std::snprintf(buf, sizeof(buf), "%.9g", beta.residual);
  os << "beta residual   = " << buf << "\n";
  return os.str();
}

} // namespace homog

#include "homog/saddle.hpp"

#include <sstream>
#include <vector>

#include "homog/errors.hpp"

namespace homog {

Eigen::VectorXd ConstraintSet::rhs(const Eigen::VectorXd& macro) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(rows());
  if (D.cols() > 0) {
    if (macro.size() != D.cols())
      throw ValidationError("macro vector has " + std::to_string(macro.size()) +
                            " entries, constraint D expects " +
                            std::to_string(D.cols()));
    g = D * macro;
  }
  if (g0.size() > 0) g += g0;
  return g;
}

SaddleSystem::SaddleSystem(SparseMat K, SparseMat C)
    : K_(std::move(K)), C_(std::move(C)) {
  n_ = static_cast<int>(K_.rows());
  m_ = static_cast<int>(C_.rows());
  if (K_.cols() != n_ || C_.cols() != n_)
    throw ValidationError("saddle system dimension mismatch");

  // Multipliers carry the traction sign convention, K u - C^T lambda = f,
  // so that lambda^T (D macro) = u^T K u >= 0 and the extracted response
  // (1/V) D^T lambda is the positive-definite one. The block matrix
  // [[K, -C^T], [-C, 0]] stays symmetric.
  SparseMat A(n_ + m_, n_ + m_);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(K_.nonZeros() + 2 * C_.nonZeros()));
  for (int k = 0; k < K_.outerSize(); ++k)
    for (SparseMat::InnerIterator it(K_, k); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  for (int k = 0; k < C_.outerSize(); ++k)
    for (SparseMat::InnerIterator it(C_, k); it; ++it) {
      trips.emplace_back(n_ + static_cast<int>(it.row()),
                         static_cast<int>(it.col()), -it.value());
      trips.emplace_back(static_cast<int>(it.col()),
                         n_ + static_cast<int>(it.row()), -it.value());
    }
  A.setFromTriplets(trips.begin(), trips.end());
  A.makeCompressed();

  lu_ = std::make_unique<Eigen::SparseLU<SparseMat>>();
  lu_->analyzePattern(A);
  lu_->factorize(A);
  if (lu_->info() != Eigen::Success) {
    std::ostringstream os;
    os << "saddle factorisation failed (n=" << n_ << ", m=" << m_
       << "): singular or rank-deficient system";
    throw SolverError(os.str());
  }
}

SaddleSystem::Solution SaddleSystem::solve(const Eigen::VectorXd& f,
                                           const Eigen::VectorXd& g) const {
  if (f.size() != n_ || g.size() != m_)
    throw ValidationError("saddle rhs dimension mismatch");
  Eigen::VectorXd rhs(n_ + m_);
  rhs.head(n_) = f;
  rhs.tail(m_) = -g;
  Eigen::VectorXd x = lu_->solve(rhs);

  Solution sol;
  sol.u = x.head(n_);
  sol.lambda = x.tail(m_);
  sol.primal_residual =
      (K_ * sol.u - C_.transpose() * sol.lambda - f).norm();
  sol.constraint_residual = (C_ * sol.u - g).norm();
  const double scale = std::max({f.norm(), g.norm(), 1.0});
  if (!(sol.primal_residual <= 1e-9 * scale) ||
      !(sol.constraint_residual <= 1e-9 * scale)) {
    std::ostringstream os;
    os << "saddle solve did not reach tolerance: |Ku - C^T l - f| = "
       << sol.primal_residual << ", |Cu - g| = " << sol.constraint_residual
       << ", scale = " << scale;
    throw SolverError(os.str());
  }
  return sol;
}

SaddleSystem::Solution SaddleSystem::solve(const Eigen::VectorXd& g) const {
  return solve(Eigen::VectorXd::Zero(n_), g);
}

void append_constraints(ConstraintSet& base, const SparseMat& extra_rows,
                        const Eigen::MatrixXd& extra_D,
                        const Eigen::VectorXd& extra_g0) {
  const int m0 = base.rows();
  const int m1 = static_cast<int>(extra_rows.rows());
  const int n = static_cast<int>(base.C.cols() > 0 ? base.C.cols()
                                                   : extra_rows.cols());
  const int k = static_cast<int>(base.D.cols() > 0 ? base.D.cols()
                                                   : extra_D.cols());

  SparseMat C(m0 + m1, n);
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(base.C.nonZeros() +
                                         extra_rows.nonZeros()));
  for (int kk = 0; kk < base.C.outerSize(); ++kk)
    for (SparseMat::InnerIterator it(base.C, kk); it; ++it)
      trips.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                         it.value());
  for (int kk = 0; kk < extra_rows.outerSize(); ++kk)
    for (SparseMat::InnerIterator it(extra_rows, kk); it; ++it)
      trips.emplace_back(m0 + static_cast<int>(it.row()),
                         static_cast<int>(it.col()), it.value());
  C.setFromTriplets(trips.begin(), trips.end());

  Eigen::MatrixXd D = Eigen::MatrixXd::Zero(m0 + m1, k);
  if (base.D.cols() > 0) D.topRows(m0) = base.D;
  if (extra_D.cols() > 0) D.bottomRows(m1) = extra_D;

  Eigen::VectorXd g0 = Eigen::VectorXd::Zero(m0 + m1);
  if (base.g0.size() > 0) g0.head(m0) = base.g0;
  if (extra_g0.size() > 0) g0.tail(m1) = extra_g0;

  base.C = std::move(C);
  base.D = std::move(D);
  base.g0 = std::move(g0);
}

} // namespace homog

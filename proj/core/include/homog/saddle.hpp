#ifndef HOMOG_SADDLE_HPP
#define HOMOG_SADDLE_HPP

#include <memory>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "homog/assembly.hpp"

namespace homog {

/// Constraint rows C u = D * macro + g0. D has one column per macro component
/// (6 for strain, 3 for gradient, 0/absent for plain value constraints).
struct ConstraintSet {
  SparseMat C;        ///< m x n
  Eigen::MatrixXd D;  ///< m x k (k = macro components), may have 0 columns
  Eigen::VectorXd g0; ///< m fixed offsets (empty means zero)

  int rows() const { return static_cast<int>(C.rows()); }
  Eigen::VectorXd rhs(const Eigen::VectorXd& macro) const;
};

/// Symmetric indefinite block system [[K, C^T], [C, 0]], factorised once on
/// construction and reused for every right-hand side.
class SaddleSystem {
public:
  /// Throws SolverError when the block matrix is singular (rank-deficient
  /// constraints or unremoved operator null space).
  SaddleSystem(SparseMat K, SparseMat C);

  int primal_size() const { return n_; }
  int multiplier_size() const { return m_; }

  struct Solution {
    Eigen::VectorXd u;
    Eigen::VectorXd lambda;
    double primal_residual = 0.0;     ///< |K u - C^T lambda - f|
    double constraint_residual = 0.0; ///< |C u - g|
  };

  /// Solves K u - C^T lambda = f, C u = g (lambda carries the traction sign
  /// convention). Residuals above 1e-9 * max(|f|, |g|, 1) raise SolverError.
  Solution solve(const Eigen::VectorXd& f, const Eigen::VectorXd& g) const;
  /// Homogenisation form: f = 0.
  Solution solve(const Eigen::VectorXd& g) const;

  const SparseMat& K() const { return K_; }
  const SparseMat& C() const { return C_; }

private:
  SparseMat K_;
  SparseMat C_;
  int n_ = 0;
  int m_ = 0;
  std::unique_ptr<Eigen::SparseLU<SparseMat>> lu_;
};

/// Appends rows of B (with zero D columns and zero offsets) to a constraint set.
void append_constraints(ConstraintSet& base, const SparseMat& extra_rows,
                        const Eigen::MatrixXd& extra_D,
                        const Eigen::VectorXd& extra_g0);

} // namespace homog

#endif

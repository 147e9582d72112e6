#pragma once

#include <Eigen/Core>

namespace l1persist::detail {

/// x * beta, summing only the nonzero columns when beta is sparse. The branch
/// depends only on beta, so results are reproducible.
inline Eigen::VectorXd margin(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
  const Eigen::Index m = beta.size();
  Eigen::Index nnz = 0;
  for (Eigen::Index j = 0; j < m; ++j) nnz += beta[j] != 0.0;
  if (4 * nnz >= m) return x * beta;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(x.rows());
  for (Eigen::Index j = 0; j < m; ++j) {
    if (beta[j] != 0.0) out.noalias() += beta[j] * x.col(j);
  }
  return out;
}

}  // namespace l1persist::detail

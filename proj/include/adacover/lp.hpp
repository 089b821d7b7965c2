#pragma once

#include <Eigen/Dense>
#include <vector>

namespace adacover::lp {

enum class Status { optimal, infeasible, unbounded };

struct Solution {
  Status status = Status::infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
};

/// Dense two-phase simplex with Bland's rule.
///
/// maximize c.x  subject to  A x <= b, with x_j >= 0 where nonneg[j] is set
/// and x_j free otherwise. Intended for the small problems that arise from
/// polytopes in a handful of dimensions; no sparsity is exploited.
Solution maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const std::vector<bool>& nonneg);

}  // namespace adacover::lp

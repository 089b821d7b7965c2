#include "adacover/lp.hpp"

#include <cmath>
#include <limits>

#include "adacover/error.hpp"

namespace adacover::lp {
namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-11;
constexpr int kMaxIterations = 50000;

class Tableau {
 public:
  Tableau(Eigen::MatrixXd t, std::vector<int> basis) : t_(std::move(t)), basis_(std::move(basis)) {}

  Eigen::Index rows() const { return t_.rows(); }
  Eigen::Index cols() const { return t_.cols() - 1; }
  double rhs(Eigen::Index i) const { return t_(i, t_.cols() - 1); }
  double at(Eigen::Index i, Eigen::Index j) const { return t_(i, j); }
  int basic(Eigen::Index i) const { return basis_[static_cast<std::size_t>(i)]; }

  void pivot(Eigen::Index r, Eigen::Index c) {
    t_.row(r) /= t_(r, c);
    for (Eigen::Index i = 0; i < t_.rows(); ++i) {
      if (i == r) continue;
      const double f = t_(i, c);
      if (f != 0.0) t_.row(i) -= f * t_.row(r);
    }
    basis_[static_cast<std::size_t>(r)] = static_cast<int>(c);
  }

  void drop_row(Eigen::Index r) {
    const Eigen::Index n = t_.rows();
    Eigen::MatrixXd next(n - 1, t_.cols());
    next.topRows(r) = t_.topRows(r);
    next.bottomRows(n - 1 - r) = t_.bottomRows(n - 1 - r);
    t_ = std::move(next);
    basis_.erase(basis_.begin() + r);
  }

  /// Minimizes cost.x over the columns allowed by `allowed`. Returns false
  /// when the objective is unbounded below.
  bool minimize(const Eigen::VectorXd& cost, Eigen::Index allowed) {
    for (int iter = 0; iter < kMaxIterations; ++iter) {
      // Bland: lowest-index column with negative reduced cost.
      Eigen::Index enter = -1;
      for (Eigen::Index j = 0; j < allowed; ++j) {
        double reduced = cost(j);
        for (Eigen::Index i = 0; i < rows(); ++i) reduced -= cost(basic(i)) * t_(i, j);
        if (reduced < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return true;

      Eigen::Index leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (Eigen::Index i = 0; i < rows(); ++i) {
        const double a = t_(i, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - 1e-14 || (std::abs(ratio - best) <= 1e-14 && leave >= 0 && basic(i) < basic(leave))) {
          best = ratio;
          leave = i;
        }
      }
      if (leave < 0) return false;
      pivot(leave, enter);
    }
    fail(ErrorKind::lp_failure, "simplex iteration limit reached");
  }

 private:
  Eigen::MatrixXd t_;
  std::vector<int> basis_;
};

}  // namespace

Solution maximize(const Eigen::VectorXd& c, const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                  const std::vector<bool>& nonneg) {
  const Eigen::Index m = A.rows();
  const Eigen::Index n = A.cols();
  require(c.size() == n && b.size() == m && static_cast<Eigen::Index>(nonneg.size()) == n,
          "lp: inconsistent problem dimensions");

  // Column layout: structural (free variables split into +/-), slacks, artificials.
  std::vector<Eigen::Index> pos_col(static_cast<std::size_t>(n)), neg_col(static_cast<std::size_t>(n), -1);
  Eigen::Index ns = 0;
  for (Eigen::Index j = 0; j < n; ++j) {
    pos_col[static_cast<std::size_t>(j)] = ns++;
    if (!nonneg[static_cast<std::size_t>(j)]) neg_col[static_cast<std::size_t>(j)] = ns++;
  }
  Eigen::Index n_art = 0;
  for (Eigen::Index i = 0; i < m; ++i) n_art += b(i) < 0 ? 1 : 0;
  const Eigen::Index slack0 = ns;
  const Eigen::Index art0 = ns + m;
  const Eigen::Index total = art0 + n_art;

  Eigen::MatrixXd t = Eigen::MatrixXd::Zero(m, total + 1);
  std::vector<int> basis(static_cast<std::size_t>(m));
  Eigen::Index art = art0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double sign = b(i) < 0 ? -1.0 : 1.0;
    for (Eigen::Index j = 0; j < n; ++j) {
      t(i, pos_col[static_cast<std::size_t>(j)]) = sign * A(i, j);
      if (neg_col[static_cast<std::size_t>(j)] >= 0) t(i, neg_col[static_cast<std::size_t>(j)]) = -sign * A(i, j);
    }
    t(i, slack0 + i) = sign;
    t(i, total) = sign * b(i);
    if (sign < 0) {
      t(i, art) = 1.0;
      basis[static_cast<std::size_t>(i)] = static_cast<int>(art++);
    } else {
      basis[static_cast<std::size_t>(i)] = static_cast<int>(slack0 + i);
    }
  }

  Tableau tab(std::move(t), std::move(basis));
  Solution sol;

  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(total);
    phase1.tail(n_art).setOnes();
    tab.minimize(phase1, total);
    double infeas = 0.0;
    double scale = 1.0;
    for (Eigen::Index i = 0; i < tab.rows(); ++i) {
      if (tab.basic(i) >= art0) infeas += tab.rhs(i);
    }
    for (Eigen::Index i = 0; i < m; ++i) scale = std::max(scale, std::abs(b(i)));
    if (infeas > 1e-9 * scale) {
      sol.status = Status::infeasible;
      return sol;
    }
    // Pivot remaining (zero-level) artificials out of the basis.
    for (Eigen::Index i = 0; i < tab.rows();) {
      if (tab.basic(i) < art0) {
        ++i;
        continue;
      }
      Eigen::Index col = -1;
      for (Eigen::Index j = 0; j < art0; ++j) {
        if (std::abs(tab.at(i, j)) > 1e-9) {
          col = j;
          break;
        }
      }
      if (col >= 0) {
        tab.pivot(i, col);
        ++i;
      } else {
        tab.drop_row(i);
      }
    }
  }

  Eigen::VectorXd cost = Eigen::VectorXd::Zero(total);
  for (Eigen::Index j = 0; j < n; ++j) {
    cost(pos_col[static_cast<std::size_t>(j)]) = -c(j);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) cost(neg_col[static_cast<std::size_t>(j)]) = c(j);
  }
  if (!tab.minimize(cost, art0)) {
    sol.status = Status::unbounded;
    return sol;
  }

  Eigen::VectorXd z = Eigen::VectorXd::Zero(total);
  for (Eigen::Index i = 0; i < tab.rows(); ++i) z(tab.basic(i)) = tab.rhs(i);
  sol.x.resize(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    sol.x(j) = z(pos_col[static_cast<std::size_t>(j)]);
    if (neg_col[static_cast<std::size_t>(j)] >= 0) sol.x(j) -= z(neg_col[static_cast<std::size_t>(j)]);
  }
  sol.objective = c.dot(sol.x);
  sol.status = Status::optimal;
  return sol;
}

}  // namespace adacover::lp

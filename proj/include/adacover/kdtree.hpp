#pragma once

#include <Eigen/Dense>
#include <utility>
#include <vector>

#include "adacover/geometry.hpp"

namespace adacover {

/// Static k-d tree over a point set for nearest-neighbor queries in low
/// dimension. The tree keeps its own copy of the points.
class KdTree {
 public:
  KdTree() = default;
  explicit KdTree(PointSet pts, int leaf_size = 8);

  Eigen::Index size() const { return pts_.size(); }
  Eigen::Index dim() const { return pts_.dim(); }
  const PointSet& points() const { return pts_; }

  /// Index and distance of the nearest point; equal distances resolve to the
  /// lowest index. Requires a non-empty tree.
  std::pair<Eigen::Index, double> nearest(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// Per-node minimum of `values` (indexed like the input points); feed the
  /// result to cone_min.
  std::vector<double> node_minima(const Eigen::VectorXd& values) const;

  /// min_i (values[i] + k * |x - p_i|), pruned with the k-d box bounds.
  double cone_min(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& values,
                  const std::vector<double>& minima, double k) const;

 private:
  struct Node {
    Eigen::Index begin = 0;
    Eigen::Index end = 0;
    int left = -1;
    int right = -1;
    Eigen::VectorXd lo;
    Eigen::VectorXd hi;
  };

  int build(Eigen::Index begin, Eigen::Index end);
  double box_distance(const Node& node, const Eigen::Ref<const Eigen::VectorXd>& x) const;
  void nearest_rec(int node, const Eigen::Ref<const Eigen::VectorXd>& x, double& best_d2,
                   Eigen::Index& best_i) const;
  void cone_rec(int node, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& values,
                const std::vector<double>& minima, double k, double& best) const;

  PointSet pts_;
  std::vector<Eigen::Index> order_;
  std::vector<Node> nodes_;
  int leaf_size_ = 8;
};

}  // namespace adacover

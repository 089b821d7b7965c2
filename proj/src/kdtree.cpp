#include "adacover/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "adacover/error.hpp"

namespace adacover {

KdTree::KdTree(PointSet pts, int leaf_size) : pts_(std::move(pts)), leaf_size_(std::max(1, leaf_size)) {
  order_.resize(static_cast<std::size_t>(pts_.size()));
  std::iota(order_.begin(), order_.end(), Eigen::Index{0});
  if (pts_.size() > 0) build(0, pts_.size());
}

int KdTree::build(Eigen::Index begin, Eigen::Index end) {
  Node node;
  node.begin = begin;
  node.end = end;
  node.lo = pts_[order_[static_cast<std::size_t>(begin)]];
  node.hi = node.lo;
  for (Eigen::Index i = begin + 1; i < end; ++i) {
    const auto p = pts_[order_[static_cast<std::size_t>(i)]];
    node.lo = node.lo.cwiseMin(p);
    node.hi = node.hi.cwiseMax(p);
  }
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(node);
  if (end - begin <= leaf_size_) return id;

  Eigen::Index axis = 0;
  (node.hi - node.lo).maxCoeff(&axis);
  const Eigen::Index mid = begin + (end - begin) / 2;
  auto first = order_.begin() + begin;
  std::nth_element(first, order_.begin() + mid, order_.begin() + end, [&](Eigen::Index u, Eigen::Index v) {
    const double pu = pts_.coords(axis, u);
    const double pv = pts_.coords(axis, v);
    return pu < pv || (pu == pv && u < v);
  });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double KdTree::box_distance(const Node& node, const Eigen::Ref<const Eigen::VectorXd>& x) const {
  double d2 = 0.0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    double gap = 0.0;
    if (x(k) < node.lo(k)) {
      gap = node.lo(k) - x(k);
    } else if (x(k) > node.hi(k)) {
      gap = x(k) - node.hi(k);
    }
    d2 += gap * gap;
  }
  return d2;
}

void KdTree::nearest_rec(int id, const Eigen::Ref<const Eigen::VectorXd>& x, double& best_d2,
                         Eigen::Index& best_i) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (box_distance(node, x) > best_d2) return;
  if (node.left < 0) {
    for (Eigen::Index i = node.begin; i < node.end; ++i) {
      const Eigen::Index idx = order_[static_cast<std::size_t>(i)];
      const double d2 = (pts_[idx] - x).squaredNorm();
      if (d2 < best_d2 || (d2 == best_d2 && idx < best_i)) {
        best_d2 = d2;
        best_i = idx;
      }
    }
    return;
  }
  const double dl = box_distance(nodes_[static_cast<std::size_t>(node.left)], x);
  const double dr = box_distance(nodes_[static_cast<std::size_t>(node.right)], x);
  if (dl <= dr) {
    nearest_rec(node.left, x, best_d2, best_i);
    nearest_rec(node.right, x, best_d2, best_i);
  } else {
    nearest_rec(node.right, x, best_d2, best_i);
    nearest_rec(node.left, x, best_d2, best_i);
  }
}

std::pair<Eigen::Index, double> KdTree::nearest(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  require(!nodes_.empty(), "nearest: empty tree");
  require(x.size() == dim(), "nearest: dimension mismatch");
  double best_d2 = std::numeric_limits<double>::infinity();
  Eigen::Index best_i = std::numeric_limits<Eigen::Index>::max();
  nearest_rec(0, x, best_d2, best_i);
  return {best_i, std::sqrt(best_d2)};
}

std::vector<double> KdTree::node_minima(const Eigen::VectorXd& values) const {
  require(values.size() == size(), "node_minima: one value per point required");
  std::vector<double> minima(nodes_.size(), std::numeric_limits<double>::infinity());
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    for (Eigen::Index i = nodes_[n].begin; i < nodes_[n].end; ++i) {
      minima[n] = std::min(minima[n], values(order_[static_cast<std::size_t>(i)]));
    }
  }
  return minima;
}

void KdTree::cone_rec(int id, const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& values,
                      const std::vector<double>& minima, double k, double& best) const {
  const Node& node = nodes_[static_cast<std::size_t>(id)];
  if (minima[static_cast<std::size_t>(id)] + k * std::sqrt(box_distance(node, x)) >= best) return;
  if (node.left < 0) {
    for (Eigen::Index i = node.begin; i < node.end; ++i) {
      const Eigen::Index idx = order_[static_cast<std::size_t>(i)];
      best = std::min(best, values(idx) + k * (pts_[idx] - x).norm());
    }
    return;
  }
  const auto lb = [&](int child) {
    return minima[static_cast<std::size_t>(child)] +
           k * std::sqrt(box_distance(nodes_[static_cast<std::size_t>(child)], x));
  };
  if (lb(node.left) <= lb(node.right)) {
    cone_rec(node.left, x, values, minima, k, best);
    cone_rec(node.right, x, values, minima, k, best);
  } else {
    cone_rec(node.right, x, values, minima, k, best);
    cone_rec(node.left, x, values, minima, k, best);
  }
}

double KdTree::cone_min(const Eigen::Ref<const Eigen::VectorXd>& x, const Eigen::VectorXd& values,
                        const std::vector<double>& minima, double k) const {
  require(!nodes_.empty(), "cone_min: empty tree");
  require(minima.size() == nodes_.size(), "cone_min: minima do not match this tree");
  double best = std::numeric_limits<double>::infinity();
  cone_rec(0, x, values, minima, k, best);
  return best;
}

}  // namespace adacover

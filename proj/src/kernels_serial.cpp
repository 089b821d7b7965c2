#include <cmath>
#include <vector>

#include "kernels_detail.hpp"

namespace adacover::kernels {

double Moments::std_error() const {
  if (n < 2) return 0.0;
  const double nn = static_cast<double>(n);
  const double var = std::max(0.0, (sum_sq - sum * sum / nn) / (nn - 1.0));
  return std::sqrt(var / nn);
}

namespace serial {

std::uint64_t count_hits(const PolytopeH& p, const AxisBox& box, std::uint64_t n_samples, std::uint64_t seed) {
  std::uint64_t hits = 0;
  for (std::uint64_t b = 0; b < detail::block_count(n_samples); ++b) {
    hits += detail::hits_in_block(p, box, n_samples, seed, b);
  }
  return hits;
}

double max_nearest_distance(const KdTree& tree, const PointSet& queries) {
  double worst = 0.0;
  for (Eigen::Index i = 0; i < queries.size(); ++i) worst = std::max(worst, tree.nearest(queries[i]).second);
  return worst;
}

Moments sample_loss(const DensityModel& density, const PointLoss& loss, std::uint64_t n_samples,
                    std::uint64_t seed) {
  Moments total;
  for (std::uint64_t b = 0; b < detail::block_count(n_samples); ++b) {
    detail::merge(total, detail::loss_in_block(density, loss, n_samples, seed, b));
  }
  return total;
}

void for_each(std::size_t n, const std::function<void(std::size_t)>& body) {
  for (std::size_t i = 0; i < n; ++i) body(i);
}

}  // namespace serial
}  // namespace adacover::kernels

#include <omp.h>

#include <vector>

#include "kernels_detail.hpp"

namespace adacover::kernels {

int max_threads() { return omp_get_max_threads(); }

namespace omp {

std::uint64_t count_hits(const PolytopeH& p, const AxisBox& box, std::uint64_t n_samples, std::uint64_t seed) {
  const auto blocks = static_cast<std::int64_t>(detail::block_count(n_samples));
  std::uint64_t hits = 0;
#pragma omp parallel for schedule(static) reduction(+ : hits)
  for (std::int64_t b = 0; b < blocks; ++b) {
    hits += detail::hits_in_block(p, box, n_samples, seed, static_cast<std::uint64_t>(b));
  }
  return hits;
}

double max_nearest_distance(const KdTree& tree, const PointSet& queries) {
  const auto n = static_cast<std::int64_t>(queries.size());
  double worst = 0.0;
#pragma omp parallel for schedule(static) reduction(max : worst)
  for (std::int64_t i = 0; i < n; ++i) {
    const double d = tree.nearest(queries[static_cast<Eigen::Index>(i)]).second;
    if (d > worst) worst = d;
  }
  return worst;
}

Moments sample_loss(const DensityModel& density, const PointLoss& loss, std::uint64_t n_samples,
                    std::uint64_t seed) {
  const auto blocks = static_cast<std::int64_t>(detail::block_count(n_samples));
  std::vector<Moments> parts(static_cast<std::size_t>(blocks));
  for_each(parts.size(), [&](std::size_t b) { parts[b] = detail::loss_in_block(density, loss, n_samples, seed, b); });
  Moments total;
  for (const auto& part : parts) detail::merge(total, part);
  return total;
}

void for_each(std::size_t n, const std::function<void(std::size_t)>& body) {
  std::exception_ptr first;
  auto first_index = std::numeric_limits<std::size_t>::max();
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic)
  for (std::int64_t i = 0; i < count; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
#pragma omp critical(adacover_for_each)
      {
        if (static_cast<std::size_t>(i) < first_index) {
          first_index = static_cast<std::size_t>(i);
          first = std::current_exception();
        }
      }
    }
  }
  if (first) std::rethrow_exception(first);
}

}  // namespace omp
}  // namespace adacover::kernels

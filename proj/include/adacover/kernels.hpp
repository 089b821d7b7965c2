#pragma once

// Data-parallel inner loops. Each kernel exists twice: an OpenMP version
// and a plain serial reference kept for testing and benchmarking. Work is
// split into fixed blocks with their own RNG streams and reduced in block
// order, so both versions return bit-identical results for any thread count.

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <functional>

#include "adacover/geometry.hpp"
#include "adacover/kernels_fwd.hpp"
#include "adacover/rng.hpp"

namespace adacover {
class KdTree;
class DensityModel;
}  // namespace adacover

namespace adacover::kernels {

inline constexpr std::uint64_t kBlockSize = 4096;

/// Sum and sum of squares of a per-sample loss.
struct Moments {
  double sum = 0.0;
  double sum_sq = 0.0;
  std::uint64_t n = 0;

  double mean() const { return n ? sum / static_cast<double>(n) : 0.0; }
  double std_error() const;
};

/// Loss evaluated at one sample point.
using PointLoss = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&)>;

namespace serial {
std::uint64_t count_hits(const PolytopeH& p, const AxisBox& box, std::uint64_t n_samples, std::uint64_t seed);
double max_nearest_distance(const KdTree& tree, const PointSet& queries);
Moments sample_loss(const DensityModel& density, const PointLoss& loss, std::uint64_t n_samples,
                    std::uint64_t seed);
/// body(i) for i in [0, n); the first exception thrown is rethrown afterwards.
void for_each(std::size_t n, const std::function<void(std::size_t)>& body);
}  // namespace serial

namespace omp {
std::uint64_t count_hits(const PolytopeH& p, const AxisBox& box, std::uint64_t n_samples, std::uint64_t seed);
double max_nearest_distance(const KdTree& tree, const PointSet& queries);
Moments sample_loss(const DensityModel& density, const PointLoss& loss, std::uint64_t n_samples,
                    std::uint64_t seed);
void for_each(std::size_t n, const std::function<void(std::size_t)>& body);
}  // namespace omp

inline std::uint64_t count_hits(Exec e, const PolytopeH& p, const AxisBox& box, std::uint64_t n,
                                std::uint64_t seed) {
  return e == Exec::serial ? serial::count_hits(p, box, n, seed) : omp::count_hits(p, box, n, seed);
}

inline double max_nearest_distance(Exec e, const KdTree& tree, const PointSet& queries) {
  return e == Exec::serial ? serial::max_nearest_distance(tree, queries) : omp::max_nearest_distance(tree, queries);
}

inline Moments sample_loss(Exec e, const DensityModel& density, const PointLoss& loss, std::uint64_t n,
                           std::uint64_t seed) {
  return e == Exec::serial ? serial::sample_loss(density, loss, n, seed) : omp::sample_loss(density, loss, n, seed);
}

inline void for_each(Exec e, std::size_t n, const std::function<void(std::size_t)>& body) {
  if (e == Exec::serial) {
    serial::for_each(n, body);
  } else {
    omp::for_each(n, body);
  }
}

int max_threads();

}  // namespace adacover::kernels

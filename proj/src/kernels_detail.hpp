#pragma once

// Per-block bodies shared by the serial and OpenMP kernels.

#include <algorithm>
#include <cstdint>
#include <exception>
#include <limits>

#include "adacover/covering.hpp"
#include "adacover/kdtree.hpp"
#include "adacover/kernels.hpp"

namespace adacover::kernels::detail {

inline std::uint64_t block_count(std::uint64_t n) { return (n + kBlockSize - 1) / kBlockSize; }

inline std::uint64_t block_length(std::uint64_t n, std::uint64_t block) {
  return std::min(kBlockSize, n - block * kBlockSize);
}

inline std::uint64_t hits_in_block(const PolytopeH& p, const AxisBox& box, std::uint64_t n, std::uint64_t seed,
                                   std::uint64_t block) {
  Rng rng = make_rng(seed, StreamTag::volume, block);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const Eigen::VectorXd width = box.hi - box.lo;
  Eigen::VectorXd x(p.dim());
  std::uint64_t hits = 0;
  const std::uint64_t len = block_length(n, block);
  for (std::uint64_t i = 0; i < len; ++i) {
    for (Eigen::Index k = 0; k < x.size(); ++k) x(k) = box.lo(k) + width(k) * unit(rng);
    if (p.contains(x, 0.0)) ++hits;
  }
  return hits;
}

inline Moments loss_in_block(const DensityModel& density, const PointLoss& loss, std::uint64_t n,
                             std::uint64_t seed, std::uint64_t block) {
  Rng rng = make_rng(seed, StreamTag::gen_error, block);
  Eigen::VectorXd x(density.dim());
  Moments m;
  const std::uint64_t len = block_length(n, block);
  for (std::uint64_t i = 0; i < len; ++i) {
    density.sample_into(rng, x);
    const double v = loss(x);
    m.sum += v;
    m.sum_sq += v * v;
  }
  m.n = len;
  return m;
}

inline void merge(Moments& into, const Moments& part) {
  into.sum += part.sum;
  into.sum_sq += part.sum_sq;
  into.n += part.n;
}

}  // namespace adacover::kernels::detail

#include "adacover/covering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "adacover/error.hpp"
#include "adacover/kdtree.hpp"
#include "adacover/kernels.hpp"

namespace adacover {

namespace {

// Area of the intersection of the unit disk with a disk of radius g whose
// center is at distance r from the origin (partial overlap assumed).
double lens_area(double r, double g) {
  const auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
  const double a1 = std::acos(clamp1((r * r + g * g - 1.0) / (2.0 * r * g)));
  const double a2 = std::acos(clamp1((r * r + 1.0 - g * g) / (2.0 * r)));
  const double k = (-r + g + 1.0) * (r + g - 1.0) * (r - g + 1.0) * (r + g + 1.0);
  return g * g * a1 + a2 - 0.5 * std::sqrt(std::max(0.0, k));
}

std::optional<double> exact_uniform_mass(int d, double r, double gamma) {
  if (r + gamma <= 1.0) return std::pow(gamma, d);
  if (gamma >= 1.0 + r) return 1.0;
  if (r >= 1.0 + gamma) return 0.0;
  if (d == 1) {
    const double lo = std::max(-1.0, r - gamma);
    const double hi = std::min(1.0, r + gamma);
    return std::max(0.0, hi - lo) / 2.0;
  }
  if (d == 2) return lens_area(r, gamma) / std::numbers::pi;
  return std::nullopt;
}

}  // namespace

MassEstimate prob_mass_ball(const DensityModel& density, const Eigen::Ref<const Eigen::VectorXd>& center,
                            double gamma, std::uint64_t n_samples, std::uint64_t seed) {
  require(gamma > 0.0, "prob_mass_ball: gamma must be positive");
  require(center.size() == density.dim(), "prob_mass_ball: dimension mismatch");
  const int d = density.dim();
  MassEstimate out;
  if (density.kind() == DensityKind::uniform_ball) {
    if (auto exact = exact_uniform_mass(d, center.norm(), gamma)) {
      out.value = *exact;
      out.exact = true;
      return out;
    }
  }
  require(n_samples >= 2, "prob_mass_ball: Monte Carlo needs at least 2 samples");
  Rng rng = make_rng(seed, StreamTag::prob_mass, 0);
  Eigen::VectorXd u(d);
  double sum = 0.0;
  double sum_sq = 0.0;
  for (std::uint64_t i = 0; i < n_samples; ++i) {
    sample_unit_ball(d, rng, u);
    const double v = density.pdf(center + gamma * u);
    sum += v;
    sum_sq += v * v;
  }
  const double n = static_cast<double>(n_samples);
  const double vol = unit_ball_volume(d) * std::pow(gamma, d);
  const double mean = sum / n;
  const double var = std::max(0.0, (sum_sq - sum * sum / n) / (n - 1.0));
  out.value = vol * mean;
  out.std_error = vol * std::sqrt(var / n);
  return out;
}

CEstimate estimate_c(const DensityModel& density, double gamma, const PointSet& probes, std::uint64_t n_samples,
                     std::uint64_t seed) {
  require(gamma > 0.0, "estimate_c: gamma must be positive");
  require(!probes.empty(), "estimate_c: empty probe set");
  std::vector<double> masses(static_cast<std::size_t>(probes.size()));
  kernels::for_each(kernels::Exec::parallel, masses.size(), [&](std::size_t i) {
    const auto idx = static_cast<Eigen::Index>(i);
    masses[i] = prob_mass_ball(density, probes[idx], gamma, n_samples, derive_seed(seed, StreamTag::prob_mass, i)).value;
  });
  CEstimate out;
  out.argmin = 0;
  out.min_mass = masses[0];
  for (std::size_t i = 1; i < masses.size(); ++i) {
    if (masses[i] < out.min_mass) {
      out.min_mass = masses[i];
      out.argmin = static_cast<Eigen::Index>(i);
    }
  }
  out.zero_mass = out.min_mass <= 0.0;
  out.c = out.zero_mass ? 0.0 : out.min_mass / std::pow(gamma, density.dim());
  return out;
}

std::uint64_t per_point_cover_time(const DensityModel& density, const Eigen::Ref<const Eigen::VectorXd>& x,
                                   double gamma, Rng& rng, std::uint64_t max_draws) {
  require(gamma > 0.0, "per_point_cover_time: gamma must be positive");
  require(x.size() == density.dim(), "per_point_cover_time: dimension mismatch");
  Eigen::VectorXd s(density.dim());
  const double g2 = gamma * gamma;
  for (std::uint64_t m = 1; m <= max_draws; ++m) {
    density.sample_into(rng, s);
    if ((s - x).squaredNorm() <= g2) return m;
  }
  fail(ErrorKind::timeout, "point not covered within " + std::to_string(max_draws) + " draws");
}

std::vector<std::uint64_t> per_point_cover_times(const DensityModel& density,
                                                 const Eigen::Ref<const Eigen::VectorXd>& x, double gamma,
                                                 std::size_t n, std::uint64_t seed, std::uint64_t max_draws,
                                                 kernels::Exec exec) {
  std::vector<std::uint64_t> out(n);
  const Eigen::VectorXd point = x;
  kernels::for_each(exec, n, [&](std::size_t i) {
    Rng rng = make_rng(seed, StreamTag::point_cover, i);
    out[i] = per_point_cover_time(density, point, gamma, rng, max_draws);
  });
  return out;
}

PointSet cover_grid(int d, double gamma) {
  require(gamma > 0.0, "cover_grid: gamma must be positive");
  return ball_grid(d, std::min(2.0, gamma / 10.0));
}

CoverTrial first_cover_time(const DensityModel& density, double gamma, const PointSet& grid, Rng& rng,
                            std::uint64_t max_draws) {
  require(gamma > 0.0, "first_cover_time: gamma must be positive");
  CoverTrial trial;
  trial.gamma = gamma;
  if (grid.empty()) return trial;
  require(grid.dim() == density.dim(), "first_cover_time: dimension mismatch");

  std::vector<Eigen::Index> uncovered(static_cast<std::size_t>(grid.size()));
  for (Eigen::Index i = 0; i < grid.size(); ++i) uncovered[static_cast<std::size_t>(i)] = i;
  std::vector<std::uint64_t> times(static_cast<std::size_t>(grid.size()), 0);
  Eigen::VectorXd s(density.dim());
  const double g2 = gamma * gamma;
  std::uint64_t m = 0;
  while (!uncovered.empty()) {
    if (m >= max_draws) fail(ErrorKind::timeout, "grid not covered within " + std::to_string(max_draws) + " draws");
    ++m;
    density.sample_into(rng, s);
    std::size_t keep = 0;
    for (std::size_t j = 0; j < uncovered.size(); ++j) {
      const Eigen::Index idx = uncovered[j];
      if ((grid[idx] - s).squaredNorm() <= g2) {
        times[static_cast<std::size_t>(idx)] = m;
      } else {
        uncovered[keep++] = idx;
      }
    }
    uncovered.resize(keep);
  }
  trial.first_cover_m = m;
  double weighted = 0.0;
  double weight = 0.0;
  double plain = 0.0;
  for (Eigen::Index i = 0; i < grid.size(); ++i) {
    const auto t = static_cast<double>(times[static_cast<std::size_t>(i)]);
    const double w = density.pdf(grid[i]);
    weighted += w * t;
    weight += w;
    plain += t;
    trial.max_point_time = std::max(trial.max_point_time, times[static_cast<std::size_t>(i)]);
  }
  trial.mean_point_time = weight > 0.0 ? weighted / weight : plain / static_cast<double>(grid.size());
  return trial;
}

std::vector<CoverTrial> cover_trials(const DensityModel& density, double gamma, const PointSet& grid,
                                     std::size_t n_trials, std::uint64_t master_seed, std::uint64_t max_draws,
                                     kernels::Exec exec) {
  std::vector<CoverTrial> out(n_trials);
  kernels::for_each(exec, n_trials, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(master_seed, StreamTag::cover_trial, t);
    Rng rng(seed);
    out[t] = first_cover_time(density, gamma, grid, rng, max_draws);
    out[t].seed = seed;
  });
  return out;
}

Delta1Result delta1_curve(const DensityModel& density, double gamma, const PointSet& grid,
                          const std::vector<std::uint64_t>& m_values, std::size_t n_trials, std::uint64_t master_seed,
                          double c_hat, kernels::Exec exec) {
  require(n_trials >= 30, "delta1_curve: need at least 30 trials");
  Delta1Result out;
  out.trials = cover_trials(density, gamma, grid, n_trials, master_seed, kMaxCoverDraws, exec);
  const double n = static_cast<double>(n_trials);
  const double gd = std::pow(gamma, density.dim());
  for (std::uint64_t m : m_values) {
    Delta1Point pt;
    pt.m = m;
    const auto failures = std::count_if(out.trials.begin(), out.trials.end(),
                                        [m](const CoverTrial& t) { return t.first_cover_m > m; });
    pt.uncovered_fraction = static_cast<double>(failures) / n;
    pt.std_error = std::sqrt(pt.uncovered_fraction * (1.0 - pt.uncovered_fraction) / n);
    pt.markov_bound = (m == 0 || c_hat <= 0.0) ? std::numeric_limits<double>::infinity()
                                                : 1.0 / (c_hat * static_cast<double>(m) * gd);
    out.points.push_back(pt);
  }
  return out;
}

double point_cover_bound(double c, double gamma, int d) {
  require(c > 0.0, "point_cover_bound: c must be positive");
  require(gamma > 0.0, "point_cover_bound: gamma must be positive");
  require(d >= 1, "point_cover_bound: dimension must be >= 1");
  return 1.0 / (c * std::pow(gamma, d));
}

double min_cube_count(double gamma, int d) {
  require(gamma > 0.0, "min_cube_count: gamma must be positive");
  require(d >= 1, "min_cube_count: dimension must be >= 1");
  return std::pow(gamma, -d) * std::pow(std::sqrt(static_cast<double>(d)) / 2.0, d);
}

HistogramCheck histogram_check(const PointSet& train, const std::vector<Ball>& partition,
                               const DensityModel& density, std::uint64_t n_samples, std::uint64_t seed) {
  require(!partition.empty(), "histogram_check: empty partition");
  require(!train.empty(), "histogram_check: empty training set");
  PointSet centers(train.dim(), static_cast<Eigen::Index>(partition.size()));
  for (std::size_t j = 0; j < partition.size(); ++j) {
    require(partition[j].center.size() == train.dim(), "histogram_check: dimension mismatch");
    centers[static_cast<Eigen::Index>(j)] = partition[j].center;
  }
  const KdTree tree(centers);
  HistogramCheck out;
  out.counts.assign(partition.size(), 0);
  for (Eigen::Index i = 0; i < train.size(); ++i) ++out.counts[static_cast<std::size_t>(tree.nearest(train[i]).first)];
  out.masses.resize(partition.size());
  const double n = static_cast<double>(train.size());
  for (std::size_t j = 0; j < partition.size(); ++j) {
    out.masses[j] = prob_mass_ball(density, partition[j].center, partition[j].radius, n_samples,
                                   derive_seed(seed, StreamTag::histogram, j))
                        .value;
    out.max_deviation = std::max(out.max_deviation, std::abs(out.masses[j] - static_cast<double>(out.counts[j]) / n));
  }
  return out;
}

}  // namespace adacover

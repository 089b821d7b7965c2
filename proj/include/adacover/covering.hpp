#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "adacover/geometry.hpp"
#include "adacover/kernels_fwd.hpp"
#include "adacover/rng.hpp"

namespace adacover {

enum class DensityKind { uniform_ball, piecewise_constant_grid, truncated_gaussian };

const char* to_string(DensityKind kind);

/// Sampling density over the closed unit d-ball.
///
/// Immutable after construction; normalization constants that need Monte
/// Carlo are computed once in the factory and shared by copies, so a model
/// may be used from any number of threads.
class DensityModel {
 public:
  static DensityModel uniform(int d);

  /// Cells tile [-1,1]^d with `cells_per_axis` cells per axis; cell index is
  /// sum_k i_k * n^k (axis 0 fastest). Density is proportional to the cell
  /// weight inside the ball and zero outside.
  static DensityModel piecewise_grid(int d, int cells_per_axis, std::vector<double> weights,
                                     std::uint64_t seed = 0);

  /// Gaussian N(mean, cov) conditioned on the unit ball.
  static DensityModel truncated_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov,
                                         std::uint64_t seed = 0);

  DensityKind kind() const { return kind_; }
  int dim() const { return d_; }

  /// Normalized density value; zero outside the unit ball.
  double pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  /// One i.i.d. draw from the model.
  Point sample(Rng& rng) const;
  void sample_into(Rng& rng, Eigen::Ref<Eigen::VectorXd> out) const;

  int cells_per_axis() const { return cells_; }
  const std::vector<double>& weights() const { return weights_; }
  const Eigen::VectorXd& mean() const { return mean_; }
  const Eigen::MatrixXd& covariance() const { return cov_; }
  double normalizer() const { return normalizer_; }

 private:
  DensityModel() = default;

  int cell_of(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  DensityKind kind_ = DensityKind::uniform_ball;
  int d_ = 1;
  // piecewise grid
  int cells_ = 0;
  std::vector<double> weights_;
  std::vector<double> cumulative_;  // cumulative weight over all cells (full cell volume)
  // truncated gaussian
  Eigen::VectorXd mean_;
  Eigen::MatrixXd cov_;
  Eigen::MatrixXd chol_;
  Eigen::MatrixXd precision_;
  double gauss_scale_ = 1.0;
  // integral of the unnormalized density over the unit ball
  double normalizer_ = 1.0;
};

/// Uniform draw from the closed unit d-ball.
void sample_unit_ball(int d, Rng& rng, Eigen::Ref<Eigen::VectorXd> out);

struct MassEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = false;
};

/// Probability mass of B(center, gamma). Exact where a closed form exists
/// (uniform density: d = 1, d = 2 lens, fully interior/containing balls);
/// otherwise a Monte Carlo integral of pdf over uniform draws in the ball.
MassEstimate prob_mass_ball(const DensityModel& density, const Eigen::Ref<const Eigen::VectorXd>& center,
                            double gamma, std::uint64_t n_samples = 100000, std::uint64_t seed = 0);

struct CEstimate {
  double c = 0.0;
  bool zero_mass = false;  // uniform lower bound assumption violated
  Eigen::Index argmin = -1;
  double min_mass = 0.0;
};

/// min over probes of mass(B(probe, gamma)) / gamma^d.
CEstimate estimate_c(const DensityModel& density, double gamma, const PointSet& probes,
                     std::uint64_t n_samples = 100000, std::uint64_t seed = 0);

inline constexpr std::uint64_t kMaxCoverDraws = 100000000ULL;

/// Number of draws until a center lands within gamma of x.
std::uint64_t per_point_cover_time(const DensityModel& density, const Eigen::Ref<const Eigen::VectorXd>& x,
                                   double gamma, Rng& rng, std::uint64_t max_draws = kMaxCoverDraws);

/// n independent per-point cover times; sample i uses stream (seed, point_cover, i).
std::vector<std::uint64_t> per_point_cover_times(const DensityModel& density,
                                                 const Eigen::Ref<const Eigen::VectorXd>& x, double gamma,
                                                 std::size_t n, std::uint64_t seed,
                                                 std::uint64_t max_draws = kMaxCoverDraws,
                                                 kernels::Exec exec = kernels::Exec::parallel);

struct CoverTrial {
  std::uint64_t seed = 0;
  double gamma = 0.0;
  std::uint64_t first_cover_m = 0;
  /// pdf-weighted mean over grid points of the per-point first-cover draw.
  double mean_point_time = 0.0;
  std::uint64_t max_point_time = 0;
};

/// Grid used to certify coverage of the unit ball: spacing gamma / 10.
PointSet cover_grid(int d, double gamma);

CoverTrial first_cover_time(const DensityModel& density, double gamma, const PointSet& grid, Rng& rng,
                            std::uint64_t max_draws = kMaxCoverDraws);

/// Trial t draws from stream (master_seed, cover_trial, t).
std::vector<CoverTrial> cover_trials(const DensityModel& density, double gamma, const PointSet& grid,
                                     std::size_t n_trials, std::uint64_t master_seed,
                                     std::uint64_t max_draws = kMaxCoverDraws,
                                     kernels::Exec exec = kernels::Exec::parallel);

struct Delta1Point {
  std::uint64_t m = 0;
  double uncovered_fraction = 0.0;
  double std_error = 0.0;
  double markov_bound = 0.0;  // 1 / (c m gamma^d)
};

struct Delta1Result {
  std::vector<Delta1Point> points;
  std::vector<CoverTrial> trials;
};

/// Fraction of trials whose first m balls fail to cover the grid, for each m.
Delta1Result delta1_curve(const DensityModel& density, double gamma, const PointSet& grid,
                          const std::vector<std::uint64_t>& m_values, std::size_t n_trials,
                          std::uint64_t master_seed, double c_hat,
                          kernels::Exec exec = kernels::Exec::parallel);

/// 1 / (c gamma^d): bound on the density-weighted mean per-point cover time.
double point_cover_bound(double c, double gamma, int d);

/// Cubes of side 2 gamma / sqrt(d) needed to tile the unit ball: gamma^-d (sqrt(d)/2)^d.
double min_cube_count(double gamma, int d);

struct HistogramCheck {
  double max_deviation = 0.0;
  std::vector<double> masses;
  std::vector<std::size_t> counts;
};

/// Compares each ball's probability mass with its share of the training
/// points (nearest-center assignment, ties to the lowest index).
HistogramCheck histogram_check(const PointSet& train, const std::vector<Ball>& partition,
                               const DensityModel& density, std::uint64_t n_samples = 100000,
                               std::uint64_t seed = 0);

}  // namespace adacover

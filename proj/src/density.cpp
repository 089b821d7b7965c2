#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "adacover/covering.hpp"
#include "adacover/error.hpp"

namespace adacover {

namespace {

constexpr std::uint64_t kBoundaryCellSamples = 100000;
constexpr std::uint64_t kGaussianNormalizerSamples = 1000000;
constexpr std::uint64_t kMaxRejections = 100000000ULL;

long int_pow(long base, int exp) {
  long out = 1;
  for (int i = 0; i < exp; ++i) out *= base;
  return out;
}

}  // namespace

const char* to_string(DensityKind kind) {
  switch (kind) {
    case DensityKind::uniform_ball: return "uniform-ball";
    case DensityKind::piecewise_constant_grid: return "piecewise-constant-grid";
    case DensityKind::truncated_gaussian: return "truncated-gaussian";
  }
  return "unknown";
}

void sample_unit_ball(int d, Rng& rng, Eigen::Ref<Eigen::VectorXd> out) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  double norm = 0.0;
  do {
    for (int k = 0; k < d; ++k) out(k) = normal(rng);
    norm = out.norm();
  } while (norm == 0.0);
  const double radius = std::pow(unit(rng), 1.0 / d);
  out *= radius / norm;
}

DensityModel DensityModel::uniform(int d) {
  require(d >= 1, "density: dimension must be >= 1");
  DensityModel m;
  m.kind_ = DensityKind::uniform_ball;
  m.d_ = d;
  m.normalizer_ = unit_ball_volume(d);
  return m;
}

DensityModel DensityModel::piecewise_grid(int d, int cells_per_axis, std::vector<double> weights, std::uint64_t seed) {
  require(d >= 1 && d <= 6, "piecewise grid density: dimension must be in [1, 6]");
  require(cells_per_axis >= 1, "piecewise grid density: need at least one cell per axis");
  const long n_cells = int_pow(cells_per_axis, d);
  require(static_cast<long>(weights.size()) == n_cells,
          "piecewise grid density: expected " + std::to_string(n_cells) + " weights, got " +
              std::to_string(weights.size()));
  for (double w : weights) require(std::isfinite(w) && w >= 0.0, "piecewise grid density: weights must be >= 0");

  DensityModel m;
  m.kind_ = DensityKind::piecewise_constant_grid;
  m.d_ = d;
  m.cells_ = cells_per_axis;
  m.weights_ = std::move(weights);
  m.cumulative_.resize(m.weights_.size());
  std::partial_sum(m.weights_.begin(), m.weights_.end(), m.cumulative_.begin());

  const double side = 2.0 / cells_per_axis;
  const double cell_volume = std::pow(side, d);
  double total = 0.0;
  Eigen::VectorXd lo(d);
  Eigen::VectorXd x(d);
  for (long c = 0; c < n_cells; ++c) {
    const double w = m.weights_[static_cast<std::size_t>(c)];
    if (w == 0.0) continue;
    long rem = c;
    for (int k = 0; k < d; ++k) {
      lo(k) = -1.0 + side * static_cast<double>(rem % cells_per_axis);
      rem /= cells_per_axis;
    }
    const Eigen::VectorXd hi = lo.array() + side;
    const Eigen::VectorXd far = lo.cwiseAbs().cwiseMax(hi.cwiseAbs());
    Eigen::VectorXd near(d);
    for (int k = 0; k < d; ++k) near(k) = (lo(k) <= 0.0 && hi(k) >= 0.0) ? 0.0 : std::min(std::abs(lo(k)), std::abs(hi(k)));
    double inside = 0.0;
    if (far.norm() <= 1.0) {
      inside = cell_volume;
    } else if (near.norm() < 1.0) {
      Rng rng = make_rng(seed, StreamTag::normalization, static_cast<std::uint64_t>(c));
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      std::uint64_t hits = 0;
      for (std::uint64_t i = 0; i < kBoundaryCellSamples; ++i) {
        for (int k = 0; k < d; ++k) x(k) = lo(k) + side * unit(rng);
        if (x.squaredNorm() <= 1.0) ++hits;
      }
      inside = cell_volume * static_cast<double>(hits) / static_cast<double>(kBoundaryCellSamples);
    }
    total += w * inside;
  }
  require(total > 0.0, "piecewise grid density: no weight inside the unit ball");
  m.normalizer_ = total;
  return m;
}

DensityModel DensityModel::truncated_gaussian(Eigen::VectorXd mean, Eigen::MatrixXd cov, std::uint64_t seed) {
  const auto d = static_cast<int>(mean.size());
  require(d >= 1, "truncated gaussian: empty mean");
  require(cov.rows() == d && cov.cols() == d, "truncated gaussian: covariance shape mismatch");
  require(mean.allFinite() && cov.allFinite(), "truncated gaussian: non-finite parameters");
  require((cov - cov.transpose()).cwiseAbs().maxCoeff() <= 1e-12 * std::max(1.0, cov.cwiseAbs().maxCoeff()),
          "truncated gaussian: covariance must be symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(cov);
  require(llt.info() == Eigen::Success, "truncated gaussian: covariance must be positive definite");

  DensityModel m;
  m.kind_ = DensityKind::truncated_gaussian;
  m.d_ = d;
  m.mean_ = std::move(mean);
  m.cov_ = std::move(cov);
  m.chol_ = llt.matrixL();
  m.precision_ = llt.solve(Eigen::MatrixXd::Identity(d, d));
  const double det = std::pow(m.chol_.diagonal().prod(), 2);
  m.gauss_scale_ = std::pow(2.0 * std::numbers::pi, 0.5 * d) * std::sqrt(det);

  Rng rng = make_rng(seed, StreamTag::normalization, 0);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXd z(d);
  std::uint64_t inside = 0;
  for (std::uint64_t i = 0; i < kGaussianNormalizerSamples; ++i) {
    for (int k = 0; k < d; ++k) z(k) = normal(rng);
    if ((m.mean_ + m.chol_ * z).squaredNorm() <= 1.0) ++inside;
  }
  require(inside > 0, "truncated gaussian: no mass inside the unit ball");
  m.normalizer_ = m.gauss_scale_ * static_cast<double>(inside) / static_cast<double>(kGaussianNormalizerSamples);
  return m;
}

int DensityModel::cell_of(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  long index = 0;
  long stride = 1;
  for (int k = 0; k < d_; ++k) {
    auto i = static_cast<long>(std::floor((x(k) + 1.0) * 0.5 * cells_));
    i = std::clamp(i, 0L, static_cast<long>(cells_) - 1);
    index += i * stride;
    stride *= cells_;
  }
  return static_cast<int>(index);
}

double DensityModel::pdf(const Eigen::Ref<const Eigen::VectorXd>& x) const {
  if (x.squaredNorm() > 1.0) return 0.0;
  switch (kind_) {
    case DensityKind::uniform_ball: return 1.0 / normalizer_;
    case DensityKind::piecewise_constant_grid: return weights_[static_cast<std::size_t>(cell_of(x))] / normalizer_;
    case DensityKind::truncated_gaussian: {
      const Eigen::VectorXd diff = x - mean_;
      return std::exp(-0.5 * diff.dot(precision_ * diff)) / normalizer_;
    }
  }
  return 0.0;
}

void DensityModel::sample_into(Rng& rng, Eigen::Ref<Eigen::VectorXd> out) const {
  switch (kind_) {
    case DensityKind::uniform_ball:
      sample_unit_ball(d_, rng, out);
      return;
    case DensityKind::piecewise_constant_grid: {
      std::uniform_real_distribution<double> unit(0.0, 1.0);
      const double side = 2.0 / cells_;
      for (std::uint64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        const double u = unit(rng) * cumulative_.back();
        auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
        if (it == cumulative_.end()) --it;
        long rem = it - cumulative_.begin();
        for (int k = 0; k < d_; ++k) {
          out(k) = -1.0 + side * (static_cast<double>(rem % cells_) + unit(rng));
          rem /= cells_;
        }
        if (out.squaredNorm() <= 1.0) return;
      }
      fail(ErrorKind::timeout, "piecewise grid sampler rejected too many draws");
    }
    case DensityKind::truncated_gaussian: {
      std::normal_distribution<double> normal(0.0, 1.0);
      Eigen::VectorXd z(d_);
      for (std::uint64_t attempt = 0; attempt < kMaxRejections; ++attempt) {
        for (int k = 0; k < d_; ++k) z(k) = normal(rng);
        out = mean_ + chol_ * z;
        if (out.squaredNorm() <= 1.0) return;
      }
      fail(ErrorKind::timeout, "truncated gaussian sampler rejected too many draws");
    }
  }
}

Point DensityModel::sample(Rng& rng) const {
  Point x(d_);
  sample_into(rng, x);
  return x;
}

}  // namespace adacover

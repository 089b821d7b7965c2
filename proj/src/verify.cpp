#include "adacover/verify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>

#include "adacover/error.hpp"
#include "adacover/kernels.hpp"

namespace adacover {

const char* to_string(TargetKind kind) {
  switch (kind) {
    case TargetKind::linear_regression: return "linear-regression";
    case TargetKind::radial_regression: return "radial-regression";
    case TargetKind::halfspace_classifier: return "halfspace-classifier";
    case TargetKind::disk_classifier: return "disk-classifier";
  }
  return "unknown";
}

TargetKind target_kind_from_string(const std::string& name) {
  if (name == "linear-regression" || name == "linear") return TargetKind::linear_regression;
  if (name == "radial-regression" || name == "radial") return TargetKind::radial_regression;
  if (name == "halfspace-classifier" || name == "halfspace") return TargetKind::halfspace_classifier;
  if (name == "disk-classifier" || name == "disk") return TargetKind::disk_classifier;
  fail(ErrorKind::invalid_argument, "unknown target kind '" + name + "'");
}

namespace {

bool is_regression(TargetKind kind) {
  return kind == TargetKind::linear_regression || kind == TargetKind::radial_regression;
}

TargetSpec normalized(TargetSpec spec) {
  require(spec.d >= 1, "target: dimension must be >= 1");
  if (spec.center.size() == 0) spec.center = Eigen::VectorXd::Zero(spec.d);
  require(spec.center.size() == spec.d, "target: center dimension mismatch");
  return spec;
}

std::size_t hash_point(const VecRef& x) {
  std::size_t h = 0;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    const double v = x(k) == 0.0 ? 0.0 : x(k);  // -0 and +0 compare equal
    h = h * 1000003u ^ std::hash<double>{}(v);
  }
  return h;
}

double sphere_cap_measure(int d, double rho) {
  // (d-1)-measure of a flat section of radius rho; a point when d = 1.
  if (d == 1) return 1.0;
  return unit_ball_volume(d - 1) * std::pow(rho, d - 1);
}

}  // namespace

RegressionTarget::RegressionTarget(TargetSpec spec) : spec_(normalized(std::move(spec))) {
  switch (spec_.kind) {
    case TargetKind::linear_regression:
      require(spec_.weights.size() == spec_.d, "linear target: weights must have d entries");
      k_f_ = spec_.weights.norm();
      break;
    case TargetKind::radial_regression:
      k_f_ = std::abs(spec_.scale);
      break;
    default: fail(ErrorKind::invalid_argument, "not a regression target");
  }
}

void RegressionTarget::evaluate(const VecRef& x, Eigen::Ref<Eigen::VectorXd> out) const {
  if (spec_.kind == TargetKind::linear_regression) {
    out(0) = spec_.weights.dot(x) + spec_.offset;
  } else {
    out(0) = spec_.scale * (x - spec_.center).norm();
  }
}

ClassificationTarget::ClassificationTarget(TargetSpec spec) : spec_(normalized(std::move(spec))) {
  switch (spec_.kind) {
    case TargetKind::halfspace_classifier: {
      require(spec_.weights.size() == spec_.d, "halfspace target: weights must have d entries");
      const double norm = spec_.weights.norm();
      require(norm > 0.0, "halfspace target: zero normal");
      const double dist = std::abs(spec_.offset) / norm;
      boundary_ = dist < 1.0 ? sphere_cap_measure(spec_.d, std::sqrt(1.0 - dist * dist)) : 0.0;
      break;
    }
    case TargetKind::disk_classifier:
      require(spec_.radius > 0.0, "disk target: radius must be positive");
      require(spec_.center.norm() + spec_.radius < 1.0, "disk target: disk must lie inside the unit ball");
      boundary_ = spec_.d * unit_ball_volume(spec_.d) * std::pow(spec_.radius, spec_.d - 1);
      break;
    default: fail(ErrorKind::invalid_argument, "not a classification target");
  }
}

int ClassificationTarget::classify(const VecRef& x) const {
  if (spec_.kind == TargetKind::halfspace_classifier) return spec_.weights.dot(x) <= spec_.offset ? 0 : 1;
  return (x - spec_.center).norm() <= spec_.radius ? 0 : 1;
}

double ClassificationTarget::affirmative_radius(const VecRef& x) const {
  if (spec_.kind == TargetKind::halfspace_classifier) {
    return std::abs(spec_.weights.dot(x) - spec_.offset) / spec_.weights.norm();
  }
  return std::abs((x - spec_.center).norm() - spec_.radius);
}

TargetFunction make_target(const TargetSpec& spec) {
  if (is_regression(spec.kind)) return RegressionTarget(spec);
  return ClassificationTarget(spec);
}

int zero_one_loss(const Eigen::VectorXd& y1, const Eigen::VectorXd& y2) {
  require(y1.size() == y2.size() && y1.size() >= 1, "zero_one_loss: arity mismatch");
  const auto hot = [](const Eigen::VectorXd& y) {
    int index = -1;
    for (Eigen::Index k = 0; k < y.size(); ++k) {
      if (y(k) == 1.0) {
        require(index < 0, "zero_one_loss: input is not one-hot");
        index = static_cast<int>(k);
      } else {
        require(y(k) == 0.0, "zero_one_loss: input is not one-hot");
      }
    }
    require(index >= 0, "zero_one_loss: input is not one-hot");
    return index;
  };
  return hot(y1) == hot(y2) ? 0 : 1;
}

Eigen::VectorXd one_hot(int cls, int arity) {
  require(arity >= 1 && cls >= 0 && cls < arity, "one_hot: class index out of range");
  Eigen::VectorXd y = Eigen::VectorXd::Zero(arity);
  y(cls) = 1.0;
  return y;
}

double affirmative_radius(const TargetFunction& target, const VecRef& x) {
  const auto* cls = std::get_if<ClassificationTarget>(&target);
  require(cls != nullptr, "affirmative radius is defined for classifiers only");
  return cls->affirmative_radius(x);
}

int h_hat(const TargetFunction& target, const VecRef& x, double distance) {
  require(distance >= 0.0, "h_hat: distance must be >= 0");
  return distance > affirmative_radius(target, x) ? 1 : 0;
}

McShaneRegressor::McShaneRegressor(PointSet train, Eigen::MatrixXd values, double k)
    : values_(std::move(values)), k_(k) {
  require(!train.empty(), "McShane extension needs at least one training point");
  require(values_.cols() == train.size() && values_.rows() >= 1, "McShane extension: one value column per point");
  require(k >= 0.0 && std::isfinite(k), "McShane extension: K must be finite and >= 0");
  tree_ = KdTree(std::move(train));
  for (Eigen::Index i = 0; i < tree_.size(); ++i) exact_.emplace(hash_point(tree_.points()[i]), i);
  for (Eigen::Index r = 0; r < values_.rows(); ++r) {
    rows_.emplace_back(values_.row(r).transpose());
    minima_.push_back(tree_.node_minima(rows_.back()));
  }
  // Consistent data is reproduced exactly at the training points.
  const PointSet& pts = tree_.points();
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    for (Eigen::Index i = 0; i < pts.size(); ++i) {
      const double y = rows_[r](i);
      const double m = tree_.cone_min(pts[i], rows_[r], minima_[r], k_);
      if (m < y - 1e-9 * std::max(1.0, std::abs(y))) {
        fail(ErrorKind::infeasible_lipschitz,
             "training values are not " + std::to_string(k_) + "-Lipschitz (point " + std::to_string(i) + ")");
      }
    }
  }
}

void McShaneRegressor::evaluate(const VecRef& x, Eigen::Ref<Eigen::VectorXd> out) const {
  // Another cone can undercut y_i by an ulp at x_i when the data is exactly
  // K-Lipschitz; a coordinate match returns the stored value instead.
  const auto [lo, hi] = exact_.equal_range(hash_point(x));
  for (auto it = lo; it != hi; ++it) {
    if (tree_.points()[it->second] == x) {
      out = values_.col(it->second);
      return;
    }
  }
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    out(static_cast<Eigen::Index>(r)) = tree_.cone_min(x, rows_[r], minima_[r], k_);
  }
}

NearestNeighborClassifier::NearestNeighborClassifier(PointSet train, std::vector<int> labels, int num_classes)
    : labels_(std::move(labels)), classes_(num_classes) {
  require(!train.empty(), "nearest-neighbor classifier needs at least one training point");
  require(static_cast<Eigen::Index>(labels_.size()) == train.size(), "nearest-neighbor classifier: one label per point");
  require(num_classes >= 1, "nearest-neighbor classifier: need at least one class");
  for (int l : labels_) require(l >= 0 && l < num_classes, "nearest-neighbor classifier: label out of range");
  tree_ = KdTree(std::move(train));
}

int NearestNeighborClassifier::classify(const VecRef& x) const {
  return labels_[static_cast<std::size_t>(tree_.nearest(x).first)];
}

McShaneRegressor fit_mcshane(const PointSet& train, const Eigen::MatrixXd& values, double k) {
  return McShaneRegressor(train, values, k);
}

NearestNeighborClassifier fit_nn_classifier(const PointSet& train, const std::vector<int>& labels, int num_classes) {
  return NearestNeighborClassifier(train, labels, num_classes);
}

GenErrorEstimate gen_error_mc(const Regressor& target, const Regressor& hypothesis, const DensityModel& density,
                              std::uint64_t n_test, std::uint64_t seed, kernels::Exec exec) {
  require(n_test >= 1000, "gen_error_mc: need at least 1000 test draws");
  require(target.output_dim() == hypothesis.output_dim(), "gen_error_mc: output arity mismatch");
  const kernels::PointLoss loss = [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
    return (target(x) - hypothesis(x)).norm();
  };
  const kernels::Moments m = kernels::sample_loss(exec, density, loss, n_test, seed);
  return {m.mean(), m.std_error()};
}

GenErrorEstimate gen_error_mc(const Classifier& target, const Classifier& hypothesis, const DensityModel& density,
                              std::uint64_t n_test, std::uint64_t seed, kernels::Exec exec) {
  require(n_test >= 1000, "gen_error_mc: need at least 1000 test draws");
  const kernels::PointLoss loss = [&](const Eigen::Ref<const Eigen::VectorXd>& x) {
    return target.classify(x) == hypothesis.classify(x) ? 0.0 : 1.0;
  };
  const kernels::Moments m = kernels::sample_loss(exec, density, loss, n_test, seed);
  return {m.mean(), m.std_error()};
}

double estimate_lipschitz(const Regressor& hypothesis, std::uint64_t n_pairs, std::uint64_t seed) {
  Rng rng = make_rng(seed, StreamTag::lipschitz_pairs, 0);
  const int d = hypothesis.dim();
  Eigen::VectorXd x(d);
  Eigen::VectorXd y(d);
  Eigen::VectorXd u(d);
  double best = 0.0;
  for (std::uint64_t i = 0; i < n_pairs; ++i) {
    sample_unit_ball(d, rng, x);
    if (i % 2 == 0) {
      sample_unit_ball(d, rng, y);
    } else {
      sample_unit_ball(d, rng, u);
      y = x + 1e-3 * u;
    }
    const double dist = (x - y).norm();
    if (dist <= 0.0) continue;
    best = std::max(best, (hypothesis(x) - hypothesis(y)).norm() / dist);
  }
  return best;
}

namespace {

struct ConstRegressor final : Regressor {
  const Regressor& inner;
  explicit ConstRegressor(const Regressor& r) : inner(r) {}
  int dim() const override { return inner.dim(); }
  int output_dim() const override { return inner.output_dim(); }
  void evaluate(const VecRef& x, Eigen::Ref<Eigen::VectorXd> out) const override { inner.evaluate(x, out); }
};

TrialOutcome regression_trial(const RegressionTarget& target, const TrialConfig& cfg, const PointSet& train,
                              std::uint64_t seed) {
  TrialOutcome out;
  Eigen::MatrixXd values(1, train.size());
  for (Eigen::Index i = 0; i < train.size(); ++i) values(0, i) = target(train[i])(0);
  const std::uint64_t test_seed = derive_seed(seed, StreamTag::gen_error, 0);
  GenErrorEstimate gen;
  if (cfg.learner == Learner::oracle) {
    const ConstRegressor h(target);
    gen = gen_error_mc(target, h, cfg.density, cfg.n_test, test_seed, kernels::Exec::serial);
  } else {
    require(cfg.learner == Learner::mcshane, "regression targets need the mcshane or oracle learner");
    const double k = cfg.k_m < 0.0 ? target.lipschitz_constant() : cfg.k_m;
    const McShaneRegressor h(train, values, k);
    double emp = 0.0;
    for (Eigen::Index i = 0; i < train.size(); ++i) emp += std::abs(h(train[i])(0) - values(0, i));
    out.empirical_loss = emp / static_cast<double>(train.size());
    gen = gen_error_mc(target, h, cfg.density, cfg.n_test, test_seed, kernels::Exec::serial);
  }
  out.gen_error = gen.estimate;
  out.gen_std_error = gen.std_error;
  return out;
}

struct SelfClassifier final : Classifier {
  const Classifier& inner;
  explicit SelfClassifier(const Classifier& c) : inner(c) {}
  int dim() const override { return inner.dim(); }
  int num_classes() const override { return inner.num_classes(); }
  int classify(const VecRef& x) const override { return inner.classify(x); }
};

TrialOutcome classification_trial(const ClassificationTarget& target, const TrialConfig& cfg, const PointSet& train,
                                  std::uint64_t seed) {
  TrialOutcome out;
  const std::uint64_t test_seed = derive_seed(seed, StreamTag::gen_error, 0);
  GenErrorEstimate gen;
  if (cfg.learner == Learner::oracle) {
    const SelfClassifier h(target);
    gen = gen_error_mc(target, h, cfg.density, cfg.n_test, test_seed, kernels::Exec::serial);
  } else {
    require(cfg.learner == Learner::nearest_neighbor, "classification targets need the nearest_neighbor or oracle learner");
    std::vector<int> labels(static_cast<std::size_t>(train.size()));
    for (Eigen::Index i = 0; i < train.size(); ++i) labels[static_cast<std::size_t>(i)] = target.classify(train[i]);
    const NearestNeighborClassifier h(train, labels, target.num_classes());
    std::size_t wrong = 0;
    for (Eigen::Index i = 0; i < train.size(); ++i) {
      wrong += h.classify(train[i]) != labels[static_cast<std::size_t>(i)] ? 1 : 0;
    }
    out.empirical_loss = static_cast<double>(wrong) / static_cast<double>(train.size());
    gen = gen_error_mc(target, h, cfg.density, cfg.n_test, test_seed, kernels::Exec::serial);
  }
  out.gen_error = gen.estimate;
  out.gen_std_error = gen.std_error;
  return out;
}

}  // namespace

TrialsResult run_trials(const TrialConfig& config, kernels::Exec exec) {
  require(config.epsilon > 0.0 && config.epsilon < 1.0, "run_trials: epsilon must lie in (0, 1)");
  require(config.m >= 1, "run_trials: m must be >= 1");
  require(config.n_trials >= 30, "run_trials: need at least 30 trials");
  require(config.gamma_s > 0.0, "run_trials: gamma_s must be positive");
  require(config.target.d == config.density.dim(), "run_trials: target and density dimensions differ");
  const TargetFunction target = make_target(config.target);
  const int d = config.density.dim();
  const PointSet grid = ball_grid(d, std::min(2.0, config.gamma_s / 10.0));

  TrialsResult result;
  result.outcomes.resize(config.n_trials);
  kernels::for_each(exec, config.n_trials, [&](std::size_t t) {
    const std::uint64_t seed = derive_seed(config.master_seed, StreamTag::verify_trial, t);
    Rng rng = make_rng(seed, StreamTag::training_draw, 0);
    PointSet train(d, static_cast<Eigen::Index>(config.m));
    for (Eigen::Index i = 0; i < train.size(); ++i) config.density.sample_into(rng, train[i]);

    TrialOutcome out = std::visit(
        [&](const auto& f) {
          using T = std::decay_t<decltype(f)>;
          if constexpr (std::is_same_v<T, RegressionTarget>) {
            return regression_trial(f, config, train, seed);
          } else {
            return classification_trial(f, config, train, seed);
          }
        },
        target);
    out.seed = seed;
    out.m = config.m;
    out.gamma_realized = covering_radius(train, grid, kernels::Exec::serial);
    out.densely_covered = out.gamma_realized <= config.gamma_s;
    out.counted = out.gen_std_error < config.epsilon / 10.0;
    out.violated = out.gen_error - out.empirical_loss >= config.epsilon;
    result.outcomes[t] = out;
  });

  for (const auto& o : result.outcomes) {
    if (!o.densely_covered) ++result.covering_failures;
    if (!o.counted) continue;
    ++result.counted;
    if (o.violated) {
      ++result.violations;
      if (o.densely_covered) ++result.violations_when_covered;
    }
  }
  if (result.counted > 0) {
    const double n = static_cast<double>(result.counted);
    result.violation_rate = static_cast<double>(result.violations) / n;
    result.std_error = std::sqrt(result.violation_rate * (1.0 - result.violation_rate) / n);
  }
  return result;
}

}  // namespace adacover

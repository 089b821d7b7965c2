#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <string>
#include <unordered_map>
#include <variant>
#include <vector>

#include "adacover/covering.hpp"
#include "adacover/geometry.hpp"
#include "adacover/kdtree.hpp"
#include "adacover/kernels_fwd.hpp"

namespace adacover {

using VecRef = Eigen::Ref<const Eigen::VectorXd>;

class Regressor {
 public:
  virtual ~Regressor() = default;
  virtual int dim() const = 0;
  virtual int output_dim() const = 0;
  virtual void evaluate(const VecRef& x, Eigen::Ref<Eigen::VectorXd> out) const = 0;

  Eigen::VectorXd operator()(const VecRef& x) const {
    Eigen::VectorXd out(output_dim());
    evaluate(x, out);
    return out;
  }
};

/// One-hot classifier, represented by the index of the hot coordinate.
class Classifier {
 public:
  virtual ~Classifier() = default;
  virtual int dim() const = 0;
  virtual int num_classes() const = 0;
  virtual int classify(const VecRef& x) const = 0;
};

enum class TargetKind { linear_regression, radial_regression, halfspace_classifier, disk_classifier };

const char* to_string(TargetKind kind);
TargetKind target_kind_from_string(const std::string& name);

/// Analytic target description. Parameter meaning per kind:
///   linear_regression:    f(x) = weights . x + offset
///   radial_regression:    f(x) = scale * |x - center|
///   halfspace_classifier: class 0 iff weights . x <= offset, else class 1
///   disk_classifier:      class 0 iff |x - center| <= radius, else class 1
struct TargetSpec {
  TargetKind kind = TargetKind::linear_regression;
  int d = 1;
  Eigen::VectorXd weights;
  double offset = 0.0;
  Eigen::VectorXd center;
  double scale = 1.0;
  double radius = 0.5;
};

class RegressionTarget final : public Regressor {
 public:
  explicit RegressionTarget(TargetSpec spec);
  int dim() const override { return spec_.d; }
  int output_dim() const override { return 1; }
  void evaluate(const VecRef& x, Eigen::Ref<Eigen::VectorXd> out) const override;
  double lipschitz_constant() const { return k_f_; }
  const TargetSpec& spec() const { return spec_; }

 private:
  TargetSpec spec_;
  double k_f_ = 0.0;
};

class ClassificationTarget final : public Classifier {
 public:
  explicit ClassificationTarget(TargetSpec spec);
  int dim() const override { return spec_.d; }
  int num_classes() const override { return 2; }
  int classify(const VecRef& x) const override;
  /// (d-1)-measure of the class boundary inside the unit ball.
  double boundary_length() const { return boundary_; }
  /// Distance from x to the class boundary.
  double affirmative_radius(const VecRef& x) const;
  const TargetSpec& spec() const { return spec_; }

 private:
  TargetSpec spec_;
  double boundary_ = 0.0;
};

using TargetFunction = std::variant<RegressionTarget, ClassificationTarget>;

TargetFunction make_target(const TargetSpec& spec);

/// 0/1 loss between one-hot vectors; rejects anything else.
int zero_one_loss(const Eigen::VectorXd& y1, const Eigen::VectorXd& y2);
Eigen::VectorXd one_hot(int cls, int arity);

double affirmative_radius(const TargetFunction& target, const VecRef& x);
/// 1 when distance exceeds the affirmative radius at x, else 0.
int h_hat(const TargetFunction& target, const VecRef& x, double distance);

/// Minimal K-Lipschitz interpolant M(x) = min_i (y_i + K |x - x_i|),
/// applied per output coordinate.
class McShaneRegressor final : public Regressor {
 public:
  McShaneRegressor(PointSet train, Eigen::MatrixXd values, double k);
  int dim() const override { return static_cast<int>(tree_.dim()); }
  int output_dim() const override { return static_cast<int>(values_.rows()); }
  void evaluate(const VecRef& x, Eigen::Ref<Eigen::VectorXd> out) const override;
  double declared_lipschitz() const { return k_; }

 private:
  KdTree tree_;
  Eigen::MatrixXd values_;  // output_dim x N, columns in input order
  std::vector<Eigen::VectorXd> rows_;
  std::vector<std::vector<double>> minima_;
  // exact coordinates of training points, so M(x_i) = y_i without rounding
  std::unordered_multimap<std::size_t, Eigen::Index> exact_;
  double k_;
};

/// 1-nearest-neighbor classifier (ties to the lowest training index).
class NearestNeighborClassifier final : public Classifier {
 public:
  NearestNeighborClassifier(PointSet train, std::vector<int> labels, int num_classes);
  int dim() const override { return static_cast<int>(tree_.dim()); }
  int num_classes() const override { return classes_; }
  int classify(const VecRef& x) const override;
  const KdTree& tree() const { return tree_; }

 private:
  KdTree tree_;
  std::vector<int> labels_;
  int classes_;
};

McShaneRegressor fit_mcshane(const PointSet& train, const Eigen::MatrixXd& values, double k);
NearestNeighborClassifier fit_nn_classifier(const PointSet& train, const std::vector<int>& labels,
                                            int num_classes);

struct GenErrorEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
};

/// Monte Carlo generalization error: mean 2-norm error for regression,
/// mean 0/1 loss for classification.
GenErrorEstimate gen_error_mc(const Regressor& target, const Regressor& hypothesis,
                              const DensityModel& density, std::uint64_t n_test, std::uint64_t seed,
                              kernels::Exec exec = kernels::Exec::parallel);
GenErrorEstimate gen_error_mc(const Classifier& target, const Classifier& hypothesis,
                              const DensityModel& density, std::uint64_t n_test, std::uint64_t seed,
                              kernels::Exec exec = kernels::Exec::parallel);

/// Largest |M(x) - M(y)| / |x - y| over sampled pairs in the unit ball:
/// half the pairs are independent, half are close (|x - y| <= 1e-3).
double estimate_lipschitz(const Regressor& hypothesis, std::uint64_t n_pairs, std::uint64_t seed);

enum class Learner { mcshane, nearest_neighbor, oracle };

struct TrialConfig {
  TargetSpec target;
  DensityModel density = DensityModel::uniform(1);
  Learner learner = Learner::mcshane;
  double k_m = -1.0;  // McShane constant; negative means K_f
  std::uint64_t m = 1;
  std::size_t n_trials = 30;
  double epsilon = 0.5;
  double delta = 0.9;
  double gamma_s = 0.1;  // covering radius whose density is audited per trial
  std::uint64_t n_test = 100000;
  std::uint64_t master_seed = 0;
};

struct TrialOutcome {
  std::uint64_t seed = 0;
  std::uint64_t m = 0;
  double empirical_loss = 0.0;
  double gen_error = 0.0;
  double gen_std_error = 0.0;
  double gamma_realized = 0.0;
  bool densely_covered = false;
  bool counted = false;  // gen_std_error < eps / 10
  bool violated = false;  // gen_error - empirical_loss >= eps
};

struct TrialsResult {
  double violation_rate = 0.0;
  double std_error = 0.0;
  std::size_t counted = 0;
  std::size_t violations = 0;
  std::size_t covering_failures = 0;
  std::size_t violations_when_covered = 0;
  std::vector<TrialOutcome> outcomes;

  /// violation_rate <= delta + 3 * std_error.
  bool passes(double delta) const { return violation_rate <= delta + 3.0 * std_error; }
};

TrialsResult run_trials(const TrialConfig& config, kernels::Exec exec = kernels::Exec::parallel);

}  // namespace adacover

#include <cmath>
#include <random>

#include "adacover/bounds.hpp"
#include "adacover/verify.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace adacover;
using testutil::vec;

namespace {

TargetSpec linear(Eigen::VectorXd w, double offset = 0.0) {
  TargetSpec s;
  s.kind = TargetKind::linear_regression;
  s.d = static_cast<int>(w.size());
  s.weights = std::move(w);
  s.offset = offset;
  return s;
}

TargetSpec halfspace(Eigen::VectorXd w, double offset) {
  TargetSpec s;
  s.kind = TargetKind::halfspace_classifier;
  s.d = static_cast<int>(w.size());
  s.weights = std::move(w);
  s.offset = offset;
  return s;
}

TargetSpec disk(Eigen::VectorXd center, double r) {
  TargetSpec s;
  s.kind = TargetKind::disk_classifier;
  s.d = static_cast<int>(center.size());
  s.center = std::move(center);
  s.radius = r;
  return s;
}

struct Flipped final : Classifier {
  const Classifier& inner;
  explicit Flipped(const Classifier& c) : inner(c) {}
  int dim() const override { return inner.dim(); }
  int num_classes() const override { return 2; }
  int classify(const VecRef& x) const override { return 1 - inner.classify(x); }
};

struct Zero final : Regressor {
  int d;
  explicit Zero(int d_) : d(d_) {}
  int dim() const override { return d; }
  int output_dim() const override { return 1; }
  void evaluate(const VecRef&, Eigen::Ref<Eigen::VectorXd> out) const override { out.setZero(); }
};

}  // namespace

TEST_SUITE("verify") {

TEST_CASE("analytic targets know their constants") {
  RegressionTarget f(linear(vec({0.4})));
  CHECK(f.lipschitz_constant() == 0.4);
  CHECK(f(vec({0.5}))(0) == doctest::Approx(0.2));
  CHECK(RegressionTarget(linear(vec({3, 4}))).lipschitz_constant() == doctest::Approx(5.0));

  TargetSpec radial;
  radial.kind = TargetKind::radial_regression;
  radial.d = 2;
  radial.scale = -1.5;
  RegressionTarget r(radial);
  CHECK(r.lipschitz_constant() == doctest::Approx(1.5));
  CHECK(r(vec({0.6, 0.8}))(0) == doctest::Approx(-1.5));

  ClassificationTarget h(halfspace(vec({1, 0}), 0.0));
  CHECK(h.boundary_length() == doctest::Approx(2.0));
  CHECK(ClassificationTarget(halfspace(vec({0, 2}), 1.2)).boundary_length() == doctest::Approx(1.6));
  CHECK(ClassificationTarget(halfspace(vec({1, 0}), 1.5)).boundary_length() == 0.0);
  CHECK(ClassificationTarget(disk(vec({0, 0}), 0.3)).boundary_length() == doctest::Approx(2 * M_PI * 0.3));
  CHECK(ClassificationTarget(disk(vec({0, 0, 0}), 0.5)).boundary_length() == doctest::Approx(M_PI));
  CHECK_ERROR_KIND(ClassificationTarget(disk(vec({0.6, 0}), 0.5)), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(RegressionTarget(halfspace(vec({1, 0}), 0.0)), ErrorKind::invalid_argument);

  CHECK(target_kind_from_string("disk-classifier") == TargetKind::disk_classifier);
  CHECK_ERROR_KIND(target_kind_from_string("spline"), ErrorKind::invalid_argument);
  CHECK(std::holds_alternative<ClassificationTarget>(make_target(halfspace(vec({1, 0}), 0))));
}

TEST_CASE("zero-one loss between one-hot vectors") {
  CHECK(zero_one_loss(one_hot(0, 3), one_hot(0, 3)) == 0);
  CHECK(zero_one_loss(one_hot(0, 3), one_hot(1, 3)) == 1);
  for (int l = 1; l <= 10; ++l)
    for (int i = 0; i < l; ++i)
      for (int j = 0; j < l; ++j) {
        const auto a = one_hot(i, l), b = one_hot(j, l);
        CHECK(zero_one_loss(a, b) == doctest::Approx(std::sqrt(0.5) * (a - b).norm()).epsilon(1e-15));
      }
  CHECK_ERROR_KIND(zero_one_loss(vec({1, 1}), vec({1, 0})), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(zero_one_loss(vec({0.5, 0.5}), vec({1, 0})), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(zero_one_loss(vec({1, 0}), vec({1, 0, 0})), ErrorKind::invalid_argument);
  CHECK_ERROR_KIND(one_hot(3, 3), ErrorKind::invalid_argument);
}

TEST_CASE("affirmative radius and the outer-ball indicator") {
  const TargetFunction h = make_target(halfspace(vec({1, 0}), 0.0));
  CHECK(affirmative_radius(h, vec({0.3, 0})) == doctest::Approx(0.3));
  CHECK(affirmative_radius(h, vec({0, 0.7})) == 0.0);
  const TargetFunction dk = make_target(disk(vec({0, 0}), 0.5));
  CHECK(affirmative_radius(dk, vec({0, 0})) == doctest::Approx(0.5));

  CHECK(h_hat(h, vec({0.3, 0}), 0.0) == 0);
  CHECK(h_hat(h, vec({0.3, 0}), 0.2) == 0);
  CHECK(h_hat(h, vec({0.3, 0}), 0.31) == 1);
  for (double dist : {1e-12, 0.1, 1.0}) CHECK(h_hat(h, vec({0, 0.2}), dist) == 1);
  CHECK_ERROR_KIND(affirmative_radius(make_target(linear(vec({1}))), vec({0})), ErrorKind::invalid_argument);

  // indicator is nondecreasing in distance
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) {
    const auto x = vec({u(rng), u(rng)});
    int prev = 0;
    for (double dist = 0; dist < 2; dist += 0.05) {
      const int v = h_hat(dk, x, dist);
      CHECK(v >= prev);
      prev = v;
    }
  }
}

TEST_CASE("McShane extension") {
  auto cone = fit_mcshane(PointSet::from_points({vec({0.2, -0.1})}), Eigen::MatrixXd::Constant(1, 1, 0.7), 1.5);
  for (const auto& x : {vec({0, 0}), vec({0.9, 0.3}), vec({-1, 0})}) {
    CHECK(cone(x)(0) == doctest::Approx(0.7 + 1.5 * (x - vec({0.2, -0.1})).norm()));
  }

  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-1, 1);
  PointSet train(2, 200);
  Eigen::MatrixXd y(1, 200);
  RegressionTarget f(linear(vec({0.3, -0.4})));
  for (Eigen::Index i = 0; i < 200; ++i) {
    train[i] = vec({u(rng), u(rng)});
    y(0, i) = f(train[i])(0);
  }
  auto m = fit_mcshane(train, y, 0.5);
  for (Eigen::Index i = 0; i < 200; ++i) CHECK(m(train[i])(0) == y(0, i));
  for (int t = 0; t < 500; ++t) {
    const auto a = vec({u(rng), u(rng)}), b = vec({u(rng), u(rng)});
    CHECK(std::abs(m(a)(0) - m(b)(0)) <= 0.5 * (a - b).norm() + 1e-12);
  }
  CHECK(estimate_lipschitz(m, 20000, 3) <= 0.5 + 1e-9);

  auto flat = fit_mcshane(PointSet::from_points({vec({0.1}), vec({-0.5})}), Eigen::MatrixXd::Constant(1, 2, 2.0), 0.0);
  CHECK(flat(vec({0.9}))(0) == 2.0);
  CHECK(estimate_lipschitz(flat, 5000, 1) == 0.0);

  Eigen::MatrixXd steep(1, 2);
  steep << 0.0, 1.0;
  CHECK_ERROR_KIND(fit_mcshane(PointSet::from_points({vec({0.0}), vec({0.1})}), steep, 1.0),
                   ErrorKind::infeasible_lipschitz);
}

TEST_CASE("Lipschitz estimate approaches the slope from below") {
  RegressionTarget two(linear(vec({2, 0})));
  const double est = estimate_lipschitz(two, 20000, 4);
  CHECK(est <= 2.0 + 1e-9);
  CHECK(est >= 1.99);
}

TEST_CASE("nearest-neighbour classifier") {
  auto nn = fit_nn_classifier(PointSet::from_points({vec({-0.5, 0}), vec({0.5, 0}), vec({0, 0.5})}), {1, 0, 2}, 3);
  CHECK(nn.classify(vec({-0.5, 0})) == 1);
  CHECK(nn.classify(vec({0.5, 0})) == 0);
  CHECK(nn.classify(vec({0, 0.5})) == 2);
  auto pair = fit_nn_classifier(PointSet::from_points({vec({-0.5, 0}), vec({0.5, 0})}), {1, 0}, 2);
  CHECK(pair.classify(vec({0, 0})) == 1);
  auto same = fit_nn_classifier(PointSet::from_points({vec({-0.5, 0}), vec({0.5, 0}), vec({0, 0.9})}), {1, 1, 1}, 2);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int i = 0; i < 200; ++i) CHECK(same.classify(vec({u(rng), u(rng)})) == 1);
  CHECK_ERROR_KIND(fit_nn_classifier(PointSet::from_points({vec({0, 0})}), {2}, 2), ErrorKind::invalid_argument);
}

TEST_CASE("Voronoi cells stay within the realized covering radius") {
  std::mt19937_64 rng(6);
  const auto dens = DensityModel::uniform(2);
  Rng r(7);
  PointSet train(2, 60);
  for (Eigen::Index i = 0; i < train.size(); ++i) train[i] = dens.sample(r);
  const auto grid = ball_grid(2, 0.02);
  const double gamma = covering_radius(train, grid);
  std::vector<int> labels(60);
  for (int i = 0; i < 60; ++i) labels[i] = i;
  auto nn = fit_nn_classifier(train, labels, 60);
  std::vector<double> cell_radius(60, 0.0);
  for (Eigen::Index g = 0; g < grid.size(); ++g) {
    const int owner = nn.classify(grid[g]);
    cell_radius[owner] = std::max(cell_radius[owner], (grid[g] - train[owner]).norm());
  }
  for (double cr : cell_radius) CHECK(cr <= gamma + 1e-12);
}

TEST_CASE("Monte Carlo generalization error") {
  RegressionTarget f(linear(vec({0.4})));
  const auto u1 = DensityModel::uniform(1);
  auto same = gen_error_mc(f, f, u1, 10000, 1);
  CHECK(same.estimate == 0.0);
  auto zero = gen_error_mc(f, Zero(1), u1, 100000, 2);
  // E|0.4 x| over U[-1,1] = 0.2
  CHECK(std::abs(zero.estimate - 0.2) <= 3 * zero.std_error);
  CHECK(zero.estimate >= 0.0);

  ClassificationTarget h(halfspace(vec({1, 0}), 0.0));
  auto flipped = gen_error_mc(h, Flipped(h), DensityModel::uniform(2), 10000, 3);
  CHECK(flipped.estimate == 1.0);
  CHECK(gen_error_mc(h, h, DensityModel::uniform(2), 10000, 3).estimate == 0.0);
  CHECK_ERROR_KIND(gen_error_mc(f, f, u1, 999, 1), ErrorKind::invalid_argument);

  auto s = gen_error_mc(f, Zero(1), u1, 20000, 9, kernels::Exec::serial);
  auto p = gen_error_mc(f, Zero(1), u1, 20000, 9, kernels::Exec::parallel);
  CHECK(s.estimate == p.estimate);
  CHECK(s.std_error == p.std_error);
}

TEST_CASE("trial runner") {
  TrialConfig cfg;
  cfg.target = linear(vec({0.4}));
  cfg.density = DensityModel::uniform(1);
  cfg.gamma_s = 0.3;
  cfg.epsilon = 0.48;
  cfg.delta = 0.95;
  cfg.n_test = 5000;
  cfg.n_trials = 40;
  cfg.master_seed = 8;

  SUBCASE("the oracle learner never violates") {
    cfg.learner = Learner::oracle;
    cfg.m = 20;
    auto res = run_trials(cfg);
    CHECK(res.violation_rate == 0.0);
    CHECK(res.counted == 40);
  }
  SUBCASE("one sample leaves the domain uncovered") {
    cfg.m = 1;
    auto res = run_trials(cfg);
    CHECK(res.covering_failures > 30);
    for (const auto& o : res.outcomes) CHECK(o.gamma_realized >= 0.5);
  }
  SUBCASE("ten times the sample requirement stays within delta") {
    const double floor = bounds::delta_floor(cfg.epsilon);
    cfg.delta = 0.5 * (1 + floor);
    const double m0 = bounds::m0_regression(0.4, 1, 0.5, cfg.epsilon, cfg.delta);
    cfg.m = static_cast<std::uint64_t>(std::ceil(10 * m0));
    auto res = run_trials(cfg);
    CHECK(res.passes(cfg.delta));
    for (const auto& o : res.outcomes) {
      CHECK(o.empirical_loss == 0.0);
      CHECK(o.violated == (o.gen_error - o.empirical_loss >= cfg.epsilon));
      CHECK(o.counted == (o.gen_std_error < cfg.epsilon / 10));
    }
  }
  SUBCASE("classification with nearest neighbours") {
    cfg.target = halfspace(vec({1, 0}), 0.0);
    cfg.density = DensityModel::uniform(2);
    cfg.learner = Learner::nearest_neighbor;
    cfg.epsilon = 0.8;
    cfg.gamma_s = 0.1;
    cfg.m = 500;
    auto res = run_trials(cfg);
    CHECK(res.violation_rate == 0.0);
    for (const auto& o : res.outcomes) CHECK(o.empirical_loss == 0.0);
  }
  SUBCASE("serial and parallel runs agree") {
    cfg.m = 50;
    auto a = run_trials(cfg, kernels::Exec::serial);
    auto b = run_trials(cfg, kernels::Exec::parallel);
    for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
      CHECK(a.outcomes[i].seed == b.outcomes[i].seed);
      CHECK(a.outcomes[i].gen_error == b.outcomes[i].gen_error);
      CHECK(a.outcomes[i].gamma_realized == b.outcomes[i].gamma_realized);
    }
  }
  SUBCASE("invalid configurations are rejected") {
    cfg.epsilon = 1.0;
    CHECK_ERROR_KIND(run_trials(cfg), ErrorKind::invalid_argument);
    cfg.epsilon = 0.5;
    cfg.n_trials = 10;
    CHECK_ERROR_KIND(run_trials(cfg), ErrorKind::invalid_argument);
    cfg.n_trials = 30;
    cfg.density = DensityModel::uniform(2);
    CHECK_ERROR_KIND(run_trials(cfg), ErrorKind::invalid_argument);
  }
}

TEST_CASE("violation rate does not grow with m") {
  TrialConfig cfg;
  cfg.target = linear(vec({0.9}));
  cfg.density = DensityModel::uniform(1);
  cfg.k_m = 0.9;
  cfg.gamma_s = 0.05;
  cfg.epsilon = 0.15;
  cfg.n_test = 4000;
  cfg.n_trials = 60;
  double prev_rate = 1.0, prev_se = 0.0;
  for (std::uint64_t m : {1, 3, 10, 30}) {
    cfg.m = m;
    cfg.master_seed = 100 + m;
    auto res = run_trials(cfg);
    CHECK(res.violation_rate <= prev_rate + 3 * std::max(prev_se, res.std_error) + 1e-12);
    prev_rate = res.violation_rate;
    prev_se = res.std_error;
  }
  CHECK(prev_rate < 0.5);
}

}  // TEST_SUITE

#include "adacover/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "adacover/error.hpp"
#include "adacover/geometry.hpp"

namespace adacover::bounds {

namespace {

void check_params(double w, double alpha) {
  require(w >= 1.0, "parameter count must be >= 1");
  require(alpha >= 1.0, "alpha must be >= 1");
}

void check_confidence(double eps, double delta) {
  const double gap = delta - delta_floor(eps);
  if (!(gap >= kConfidenceGap)) {
    fail(ErrorKind::infeasible_confidence,
         "delta must exceed exp(-eps^2/2) = " + std::to_string(delta_floor(eps)) + ", got " + std::to_string(delta));
  }
}

}  // namespace

double regression_bound(const RegressionBoundInputs& in) {
  return in.empirical_loss + (in.k_f + in.k_m) * in.gamma_s;
}

double regression_bound_params(const RegressionBoundInputs& in) {
  check_params(in.w, in.alpha);
  return in.empirical_loss + (in.k_f + in.k_m) / std::pow(in.w, 1.0 / std::log2(1.0 + in.alpha));
}

double classification_geom_term(int d, double gamma, double boundary_length) {
  require(d >= 2, "classification bounds need d >= 2");
  return std::pow(gamma, d - 1) * unit_ball_volume(d - 1) * boundary_length;
}

double classification_bound(const ClassificationBoundInputs& in) {
  return in.empirical_loss + classification_geom_term(in.d, in.gamma_s, in.boundary_length);
}

double classification_bound_params(const ClassificationBoundInputs& in) {
  require(in.d >= 2, "classification bounds need d >= 2");
  check_params(in.w, in.alpha);
  const double denom = std::pow(in.w, (in.d - 1) / std::log2(1.0 + in.alpha));
  return in.empirical_loss + unit_ball_volume(in.d - 1) * in.boundary_length / denom;
}

Flagged epsilon_regression(double k_f, double k_m, double gamma) {
  Flagged out;
  out.value = 2.0 * (k_f + k_m) * gamma;
  out.valid = out.value < 1.0;
  return out;
}

Flagged epsilon_classification(int d, double gamma, double boundary_length) {
  Flagged out;
  out.value = 2.0 * classification_geom_term(d, gamma, boundary_length);
  out.valid = out.value < 1.0;
  return out;
}

double gamma_max_regression(double k_f, double k_m) {
  require(k_f + k_m > 0.0, "gamma_max_regression: Lipschitz constants sum to zero");
  return 1.0 / (2.0 * (k_f + k_m));
}

double gamma_max_classification(int d, double boundary_length) {
  require(d >= 2, "classification bounds need d >= 2");
  require(boundary_length > 0.0, "gamma_max_classification: boundary length must be positive");
  return std::pow(1.0 / (2.0 * unit_ball_volume(d - 1) * boundary_length), 1.0 / (d - 1));
}

double delta_floor(double eps) { return std::exp(-eps * eps / 2.0); }

double covering_failure_bound(double m, double c, double gamma, int d) {
  require(c > 0.0, "c must be positive");
  require(m > 0.0, "m must be positive");
  require(gamma > 0.0, "gamma must be positive");
  return 1.0 / (c * m * std::pow(gamma, d));
}

DeltaBound delta_bound(double m, double c, double gamma, int d, double eps) {
  DeltaBound out;
  out.delta_upper = covering_failure_bound(m, c, gamma, d) + delta_floor(eps);
  out.constraint_ok = out.delta_upper < 1.0;
  return out;
}

double m0_general(double c, double gamma, int d, double eps, double delta) {
  require(c > 0.0, "c must be positive");
  require(gamma > 0.0, "gamma must be positive");
  check_confidence(eps, delta);
  return 1.0 / (c * std::pow(gamma, d) * (delta - delta_floor(eps)));
}

double m0_regression(double k_f, int d, double c, double eps, double delta) {
  require(c > 0.0, "c must be positive");
  require(eps > 0.0, "epsilon must be positive");
  require(k_f >= 0.0, "K_f must be >= 0");
  check_confidence(eps, delta);
  return std::pow(4.0, d) * std::pow(k_f, d) / (c * std::pow(eps, d) * (delta - delta_floor(eps)));
}

double m0_classification(double boundary_length, int d, double c, double eps, double delta) {
  require(d >= 2, "classification bounds need d >= 2");
  require(c > 0.0, "c must be positive");
  require(eps > 0.0, "epsilon must be positive");
  require(boundary_length >= 0.0, "boundary length must be >= 0");
  check_confidence(eps, delta);
  const double power = static_cast<double>(d) / (d - 1);
  return std::pow(2.0 * unit_ball_volume(d - 1) * boundary_length, power) /
         (c * std::pow(eps, power) * (delta - delta_floor(eps)));
}

double lipschitz_compose(Composition kind, const std::vector<double>& constants) {
  require(!constants.empty(), "lipschitz_compose: empty constant list");
  for (double l : constants) require(l >= 0.0 && std::isfinite(l), "lipschitz_compose: constants must be finite and >= 0");
  switch (kind) {
    case Composition::series: {
      double product = 1.0;
      for (double l : constants) product *= l;
      return product;
    }
    case Composition::parallel:
      return std::sqrt(static_cast<double>(constants.size())) * *std::max_element(constants.begin(), constants.end());
    case Composition::fusion: return *std::max_element(constants.begin(), constants.end());
  }
  return 0.0;
}

double gamma_from_params(double w, double alpha) {
  check_params(w, alpha);
  return 1.0 / std::pow(w, 1.0 / std::log2(1.0 + alpha));
}

HoeffdingRhs hoeffding_rhs(double k, double region_count) {
  require(k > 0.0, "hoeffding_rhs: k must be positive");
  require(region_count >= 1.0, "hoeffding_rhs: region count must be >= 1");
  HoeffdingRhs out;
  out.per_region = std::exp(-2.0 * k * k / region_count);
  out.conjoined = std::exp(-2.0 * k * k);
  return out;
}

namespace {

void fill_confidence(BoundReport& r, double c, double gamma, int d, std::optional<double> m,
                     std::optional<double> delta) {
  if (delta) {
    r.delta = delta;
  } else if (m && *m > 0.0 && c > 0.0 && gamma > 0.0) {
    r.delta = delta_bound(*m, c, gamma, d, r.epsilon).delta_upper;
  }
  if (r.delta) {
    r.delta_in_range = *r.delta > delta_floor(r.epsilon) && *r.delta < 1.0;
    if (*r.delta - delta_floor(r.epsilon) >= kConfidenceGap && c > 0.0 && gamma > 0.0) {
      r.m0 = m0_general(c, gamma, d, r.epsilon, *r.delta);
    }
  }
  r.m_sufficient = m && r.m0 && *m > *r.m0;
}

}  // namespace

BoundReport regression_report(const RegressionBoundInputs& in, std::optional<double> m, std::optional<double> delta) {
  require(in.k_f >= 0.0 && in.k_m >= 0.0, "Lipschitz constants must be >= 0");
  require(in.gamma_s >= 0.0, "gamma_s must be >= 0");
  require(in.d >= 1, "dimension must be >= 1");
  BoundReport r;
  const Flagged eps = epsilon_regression(in.k_f, in.k_m, in.gamma_s);
  r.epsilon = eps.value;
  r.gamma_in_range = eps.valid;
  r.empirical_term = in.empirical_loss;
  r.geometric_term = (in.k_f + in.k_m) * in.gamma_s;
  r.radius_form_bound = regression_bound(in);
  if (in.w >= 1.0 && in.alpha >= 1.0) r.params_bound = regression_bound_params(in);
  fill_confidence(r, in.c, in.gamma_s, in.d, m, delta);
  return r;
}

BoundReport classification_report(const ClassificationBoundInputs& in, std::optional<double> m,
                                  std::optional<double> delta) {
  require(in.boundary_length >= 0.0, "boundary length must be >= 0");
  require(in.gamma_s >= 0.0, "gamma_s must be >= 0");
  BoundReport r;
  const Flagged eps = epsilon_classification(in.d, in.gamma_s, in.boundary_length);
  r.epsilon = eps.value;
  r.gamma_in_range = eps.valid;
  r.empirical_term = in.empirical_loss;
  r.geometric_term = classification_geom_term(in.d, in.gamma_s, in.boundary_length);
  r.radius_form_bound = classification_bound(in);
  if (in.w >= 1.0 && in.alpha >= 1.0) r.params_bound = classification_bound_params(in);
  fill_confidence(r, in.c, in.gamma_s, in.d, m, delta);
  return r;
}

}  // namespace adacover::bounds

#pragma once

#include <optional>
#include <utility>
#include <vector>

namespace adacover::bounds {

struct RegressionBoundInputs {
  double k_f = 0.0;
  double k_m = 0.0;
  double gamma_s = 0.0;
  double empirical_loss = 0.0;
  int d = 1;
  double c = 1.0;
  double w = 1.0;  // parameter count
  double alpha = 1.0;
};

struct ClassificationBoundInputs {
  double boundary_length = 0.0;
  int d = 2;
  double gamma_s = 0.0;
  double empirical_loss = 0.0;
  double c = 1.0;
  double w = 1.0;
  double alpha = 1.0;
};

struct Flagged {
  double value = 0.0;
  bool valid = false;
};

/// Lipschitz regression bound: empirical + (K_f + K_M) gamma.
double regression_bound(const RegressionBoundInputs& in);
/// Same bound with gamma replaced by #W^(-1/log2(1+alpha)).
double regression_bound_params(const RegressionBoundInputs& in);

/// gamma^(d-1) V_{d-1} |df|  (c_P = 1 worst case).
double classification_geom_term(int d, double gamma, double boundary_length);
double classification_bound(const ClassificationBoundInputs& in);
double classification_bound_params(const ClassificationBoundInputs& in);

/// eps = 2 (K_f + K_M) gamma; valid iff eps < 1.
Flagged epsilon_regression(double k_f, double k_m, double gamma);
/// eps = 2 gamma^(d-1) V_{d-1} |df|; valid iff eps < 1.
Flagged epsilon_classification(int d, double gamma, double boundary_length);

/// gamma threshold below which eps < 1.
double gamma_max_regression(double k_f, double k_m);
double gamma_max_classification(int d, double boundary_length);

struct DeltaBound {
  double delta_upper = 0.0;  // 1/(c m gamma^d) + exp(-eps^2/2)
  bool constraint_ok = false;  // delta_upper < 1
};

DeltaBound delta_bound(double m, double c, double gamma, int d, double eps);

/// Smallest delta any m can reach: exp(-eps^2/2).
double delta_floor(double eps);

inline constexpr double kConfidenceGap = 1e-12;

double m0_general(double c, double gamma, int d, double eps, double delta);
double m0_regression(double k_f, int d, double c, double eps, double delta);
double m0_classification(double boundary_length, int d, double c, double eps, double delta);

enum class Composition { series, parallel, fusion };

double lipschitz_compose(Composition kind, const std::vector<double>& constants);

/// 1 / W^(1/log2(1+alpha)).
double gamma_from_params(double w, double alpha);

struct HoeffdingRhs {
  double per_region = 0.0;  // exp(-2k^2 / |P|)
  double conjoined = 0.0;   // exp(-2k^2)
};

HoeffdingRhs hoeffding_rhs(double k, double region_count);

/// Covering-failure bound 1 / (c m gamma^d).
double covering_failure_bound(double m, double c, double gamma, int d);

struct BoundReport {
  double epsilon = 0.0;
  std::optional<double> delta;  // uniform confidence; requested or derived from m
  std::optional<double> m0;
  double empirical_term = 0.0;
  double geometric_term = 0.0;
  double radius_form_bound = 0.0;
  std::optional<double> params_bound;
  bool gamma_in_range = false;  // eps < 1
  bool delta_in_range = false;  // exp(-eps^2/2) < delta < 1
  bool m_sufficient = false;    // m > m0
};

/// Assembles a report: delta defaults to delta_bound(m) when only m is
/// given; m0 needs a feasible delta.
BoundReport regression_report(const RegressionBoundInputs& in, std::optional<double> m,
                              std::optional<double> delta);
BoundReport classification_report(const ClassificationBoundInputs& in, std::optional<double> m,
                                  std::optional<double> delta);

}  // namespace adacover::bounds

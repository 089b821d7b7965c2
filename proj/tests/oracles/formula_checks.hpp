#pragma once

// Table and identity checks for the closed-form bounds. Shared by the unit
// suite and the acceptance binary; every mismatch comes back as a line of
// text so callers can report it however they like.

#include <cmath>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "adacover/bounds.hpp"
#include "adacover/geometry.hpp"
#include "bounds_table.hpp"

namespace oracle {

struct FormulaReport {
  int compared = 0;
  std::vector<std::string> mismatches;
};

inline void expect_rel(FormulaReport& rep, const std::string& what, double got, double want, double rel = 1e-12) {
  ++rep.compared;
  const bool ok = got == want || std::abs(got - want) <= rel * std::max(std::abs(got), std::abs(want));
  if (!ok) {
    std::ostringstream os;
    os.precision(17);
    os << what << ": got " << got << ", expected " << want;
    rep.mismatches.push_back(os.str());
  }
}

inline FormulaReport check_formula_tables() {
  namespace b = adacover::bounds;
  FormulaReport rep;
  for (const auto& r : regression_bound_table) {
    b::RegressionBoundInputs in;
    in.k_f = r.k_f;
    in.k_m = r.k_m;
    in.gamma_s = r.gamma;
    in.empirical_loss = r.emp;
    expect_rel(rep, "regression_bound", b::regression_bound(in), r.expected);
  }
  for (const auto& r : regression_bound_params_table) {
    b::RegressionBoundInputs in;
    in.k_f = r.k_f;
    in.k_m = r.k_m;
    in.empirical_loss = r.emp;
    in.w = r.w;
    in.alpha = r.alpha;
    expect_rel(rep, "regression_bound_params", b::regression_bound_params(in), r.expected);
  }
  for (const auto& r : classification_geom_term_table) {
    expect_rel(rep, "classification_geom_term", b::classification_geom_term(r.d, r.gamma, r.length), r.expected);
    b::ClassificationBoundInputs in;
    in.d = r.d;
    in.gamma_s = r.gamma;
    in.boundary_length = r.length;
    in.empirical_loss = 0.125;
    expect_rel(rep, "classification_bound", b::classification_bound(in), 0.125 + r.expected);
  }
  for (const auto& r : classification_bound_params_table) {
    b::ClassificationBoundInputs in;
    in.d = r.d;
    in.boundary_length = r.length;
    in.empirical_loss = r.emp;
    in.w = r.w;
    in.alpha = r.alpha;
    expect_rel(rep, "classification_bound_params", b::classification_bound_params(in), r.expected);
  }
  for (const auto& r : epsilon_regression_table) {
    expect_rel(rep, "epsilon_regression", b::epsilon_regression(r.k_f, r.k_m, r.gamma).value, r.expected);
  }
  for (const auto& r : epsilon_classification_table) {
    expect_rel(rep, "epsilon_classification", b::epsilon_classification(r.d, r.gamma, r.length).value, r.expected);
  }
  for (const auto& r : delta_bound_table) {
    expect_rel(rep, "delta_bound", b::delta_bound(r.m, r.c, r.gamma, r.d, r.eps).delta_upper, r.expected);
  }
  for (const auto& r : m0_general_table) {
    expect_rel(rep, "m0_general", b::m0_general(r.c, r.gamma, r.d, r.eps, r.delta), r.expected);
  }
  for (const auto& r : m0_regression_table) {
    expect_rel(rep, "m0_regression", b::m0_regression(r.k_f, r.d, r.c, r.eps, r.delta), r.expected);
  }
  for (const auto& r : m0_classification_table) {
    expect_rel(rep, "m0_classification", b::m0_classification(r.length, r.d, r.c, r.eps, r.delta), r.expected);
  }
  for (const auto& r : gamma_from_params_table) {
    expect_rel(rep, "gamma_from_params", b::gamma_from_params(r.w, r.alpha), r.expected);
  }
  for (const auto& r : hoeffding_per_region_table) {
    expect_rel(rep, "hoeffding per region", b::hoeffding_rhs(r.k, r.regions).per_region, r.expected);
  }
  for (const auto& r : hoeffding_conjoined_table) {
    expect_rel(rep, "hoeffding conjoined", b::hoeffding_rhs(r.k, 1.0).conjoined, r.expected);
  }
  for (const auto& r : gamma_max_regression_table) {
    expect_rel(rep, "gamma_max_regression", b::gamma_max_regression(r.k_f, r.k_m), r.expected);
  }
  for (const auto& r : gamma_max_classification_table) {
    expect_rel(rep, "gamma_max_classification", b::gamma_max_classification(r.d, r.length), r.expected);
  }
  for (const auto& r : unit_ball_volume_table) {
    expect_rel(rep, "unit_ball_volume", adacover::unit_ball_volume(r.d), r.expected);
  }
  for (const auto& r : compose_table) {
    expect_rel(rep, "compose series", b::lipschitz_compose(b::Composition::series, r.constants), r.series);
    expect_rel(rep, "compose parallel", b::lipschitz_compose(b::Composition::parallel, r.constants), r.parallel);
    expect_rel(rep, "compose fusion", b::lipschitz_compose(b::Composition::fusion, r.constants), r.fusion);
  }
  return rep;
}

// Specialization identities on random valid inputs:
//   m0_regression(K_f, ...)        == m0_general(c, eps / (4 K_f), ...)
//   m0_classification(|df|, ...)   == m0_general(c, (eps / (2 V_{d-1} |df|))^(1/(d-1)), ...)
//   *_bound_params(W, alpha)       == *_bound with gamma = W^(-1/log2(1+alpha))
inline FormulaReport check_formula_identities(int n_inputs = 100, std::uint64_t seed = 2024) {
  namespace b = adacover::bounds;
  FormulaReport rep;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> dim(1, 6), dim2(2, 6);
  for (int i = 0; i < n_inputs; ++i) {
    const double eps = 0.05 + 0.9 * u(rng);
    const double floor = b::delta_floor(eps);
    const double delta = floor + (1.0 - floor) * (0.01 + 0.98 * u(rng));
    const double c = 0.05 + 2.0 * u(rng);
    const double k_f = 0.01 + 5.0 * u(rng);
    const int d = dim(rng);
    expect_rel(rep, "m0_regression vs m0_general", b::m0_regression(k_f, d, c, eps, delta),
               b::m0_general(c, eps / (4.0 * k_f), d, eps, delta));

    const int dc = dim2(rng);
    const double length = 0.01 + 10.0 * u(rng);
    const double gamma_c = std::pow(eps / (2.0 * adacover::unit_ball_volume(dc - 1) * length), 1.0 / (dc - 1));
    expect_rel(rep, "m0_classification vs m0_general", b::m0_classification(length, dc, c, eps, delta),
               b::m0_general(c, gamma_c, dc, eps, delta));

    const double w = 1.0 + std::floor(1e5 * u(rng));
    const double alpha = 1.0 + 7.0 * u(rng);
    const double gw = b::gamma_from_params(w, alpha);
    b::RegressionBoundInputs r;
    r.k_f = k_f;
    r.k_m = 5.0 * u(rng);
    r.empirical_loss = u(rng);
    r.w = w;
    r.alpha = alpha;
    b::RegressionBoundInputs r_gamma = r;
    r_gamma.gamma_s = gw;
    expect_rel(rep, "regression params vs radius form", b::regression_bound_params(r), b::regression_bound(r_gamma));

    b::ClassificationBoundInputs cl;
    cl.d = dc;
    cl.boundary_length = length;
    cl.empirical_loss = u(rng);
    cl.w = w;
    cl.alpha = alpha;
    b::ClassificationBoundInputs cl_gamma = cl;
    cl_gamma.gamma_s = gw;
    expect_rel(rep, "classification params vs radius form", b::classification_bound_params(cl),
               b::classification_bound(cl_gamma));
  }
  return rep;
}

}  // namespace oracle

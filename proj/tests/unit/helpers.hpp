#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <random>
#include <vector>

#include "adacover/error.hpp"
#include "adacover/geometry.hpp"
#include "doctest.h"

namespace testutil {

inline Eigen::VectorXd vec(std::initializer_list<double> xs) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

inline bool rel_close(double a, double b, double rel) {
  if (a == b) return true;
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

// Unit triangle {x >= 0, y >= 0, x + y <= 1}.
inline adacover::PolytopeH triangle() {
  Eigen::MatrixXd a(3, 2);
  a << -1, 0, 0, -1, 1, 1;
  return {a, vec({0, 0, 1})};
}

// Random bounded polygon: 5-10 half-planes with the origin strictly inside,
// retried until bounded (checked by the caller-independent closure test).
struct RandomPolygon {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;
};

inline RandomPolygon random_polygon(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> count(5, 10);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  std::uniform_real_distribution<double> offset(0.2, 1.0);
  for (;;) {
    const int n = count(rng);
    RandomPolygon p{Eigen::MatrixXd(n, 2), Eigen::VectorXd(n)};
    std::vector<double> th(n);
    for (int i = 0; i < n; ++i) {
      th[i] = angle(rng);
      p.a(i, 0) = std::cos(th[i]);
      p.a(i, 1) = std::sin(th[i]);
      p.b(i) = offset(rng);
    }
    // bounded iff the normals are not confined to a closed half-circle
    std::sort(th.begin(), th.end());
    double gap = th.front() + 2.0 * M_PI - th.back();
    for (int i = 1; i < n; ++i) gap = std::max(gap, th[i] - th[i - 1]);
    if (gap < M_PI - 1e-6) return p;
  }
}

}  // namespace testutil

// Evaluates expr and checks it throws adacover::Error of the given kind.
#define CHECK_ERROR_KIND(expr, expected_kind)                        \
  do {                                                               \
    bool thrown_ = false;                                            \
    try {                                                            \
      (void)(expr);                                                  \
    } catch (const adacover::Error& e_) {                            \
      thrown_ = true;                                                \
      CHECK(e_.kind() == (expected_kind));                           \
    }                                                                \
    CHECK_MESSAGE(thrown_, "expected an error from: " #expr);        \
  } while (0)

#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "adacover/kernels_fwd.hpp"

namespace adacover {

using Point = Eigen::VectorXd;

/// Points stored column-wise: coords.col(i) is the i-th point.
struct PointSet {
  Eigen::MatrixXd coords;

  PointSet() = default;
  explicit PointSet(Eigen::Index dim, Eigen::Index n = 0) : coords(dim, n) {}
  explicit PointSet(Eigen::MatrixXd m) : coords(std::move(m)) {}

  static PointSet from_points(const std::vector<Point>& pts);

  Eigen::Index dim() const { return coords.rows(); }
  Eigen::Index size() const { return coords.cols(); }
  bool empty() const { return coords.cols() == 0; }
  auto operator[](Eigen::Index i) const { return coords.col(i); }
  auto operator[](Eigen::Index i) { return coords.col(i); }
};

struct Ball {
  Point center;
  double radius = 0.0;

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& p, double tol = 1e-9) const {
    return (p - center).norm() <= radius + tol;
  }
};

/// The set { x : normal.x = offset }.
struct Hyperplane {
  Eigen::VectorXd normal;
  double offset = 0.0;
};

/// Bounded convex polytope { x : a x <= b }, one facet per row.
struct PolytopeH {
  Eigen::MatrixXd a;
  Eigen::VectorXd b;

  PolytopeH() = default;
  PolytopeH(Eigen::MatrixXd a_, Eigen::VectorXd b_);

  Eigen::Index dim() const { return a.cols(); }
  Eigen::Index facet_count() const { return a.rows(); }

  /// Axis-aligned box [lo, hi].
  static PolytopeH box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi);
  static PolytopeH cube(Eigen::Index dim, double half_width = 1.0);

  bool contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol = 1e-9) const;
  PolytopeH with_facet(const Eigen::VectorXd& normal, double offset) const;
};

enum class VolumeMethod { exact, monte_carlo };

struct VolumeEstimate {
  double value = 0.0;
  double std_error = 0.0;
  VolumeMethod method = VolumeMethod::exact;
};

/// Either an exact computation (d <= 2) or hit-or-miss sampling.
struct VolumeRequest {
  bool exact = true;
  std::uint64_t n_samples = 0;
  std::uint64_t seed = 0;

  static VolumeRequest exact_volume() { return {true, 0, 0}; }
  static VolumeRequest monte_carlo(std::uint64_t n, std::uint64_t seed) { return {false, n, seed}; }
};

struct InscribedBall {
  Point center;
  double radius = 0.0;
};

struct AxisBox {
  Eigen::VectorXd lo;
  Eigen::VectorXd hi;

  double volume() const { return (hi - lo).prod(); }
};

struct CutResult {
  PolytopeH below;  // normal.x <= offset
  PolytopeH above;  // normal.x >= offset
  bool below_degenerate = false;
  bool above_degenerate = false;
};

struct DensityCheck {
  bool dense = false;
  double worst_gap = std::numeric_limits<double>::infinity();
  /// N * gamma >= d; when false no set of N balls of this radius can cover the unit ball.
  bool count_ok = false;
  bool count_warning = true;
};

inline constexpr double kDegenerateRadius = 1e-9;
inline constexpr int kMaxExactDim = 4;

double unit_ball_volume(int d);

/// Center and radius of the largest inscribed ball (a linear program).
/// Ties among optimal centers resolve to the mean of the optimal face's
/// axis-extreme points, so symmetric bodies get their symmetric center.
InscribedBall chebyshev_center(const PolytopeH& p);

/// Tight axis-aligned bounds from 2d linear programs; throws for unbounded input.
AxisBox bounding_box(const PolytopeH& p);

/// Minimal enclosing ball (Welzl, move-to-front).
Ball enclosing_ball(const PointSet& pts);

std::vector<Point> polytope_vertices(const PolytopeH& p);
double polytope_diameter(const PolytopeH& p);
VolumeEstimate polytope_volume(const PolytopeH& p, const VolumeRequest& req,
                               kernels::Exec exec = kernels::Exec::parallel);

CutResult cut(const PolytopeH& p, const Hyperplane& h);

/// Drops facets that do not support at least d vertices (d <= 4 only).
PolytopeH simplify(const PolytopeH& p);

DensityCheck is_gamma_dense(const PointSet& train, const PointSet& domain_grid, double gamma,
                            kernels::Exec exec = kernels::Exec::parallel);

/// Largest distance from a grid point to its nearest training point.
double covering_radius(const PointSet& train, const PointSet& domain_grid,
                       kernels::Exec exec = kernels::Exec::parallel);

/// Lattice points of spacing h inside the closed unit d-ball, plus radial
/// projections onto the unit sphere of lattice points in the outer shell, so
/// the boundary is always probed.
PointSet ball_grid(int d, double spacing);

/// Exact area of a convex polygon from its vertices (any order).
double convex_polygon_area(std::vector<Point> vertices);

namespace detail {
/// Vertex enumeration without the boundedness pre-check.
std::vector<Point> vertices_unchecked(const PolytopeH& p);
}  // namespace detail

}  // namespace adacover

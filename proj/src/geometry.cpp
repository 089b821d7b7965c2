#include "adacover/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <list>
#include <numbers>
#include <set>
#include <string>

#include "adacover/error.hpp"
#include "adacover/kdtree.hpp"
#include "adacover/kernels.hpp"
#include "adacover/lp.hpp"

namespace adacover {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid argument";
    case ErrorKind::empty_polytope: return "empty polytope";
    case ErrorKind::unbounded_polytope: return "unbounded polytope";
    case ErrorKind::unsupported_dimension: return "unsupported dimension";
    case ErrorKind::degenerate_polytope: return "degenerate polytope";
    case ErrorKind::refinement_stalled: return "refinement stalled";
    case ErrorKind::timeout: return "timeout";
    case ErrorKind::infeasible_confidence: return "infeasible confidence";
    case ErrorKind::infeasible_lipschitz: return "infeasible lipschitz";
    case ErrorKind::lp_failure: return "lp failure";
    case ErrorKind::io: return "io";
  }
  return "error";
}

PointSet PointSet::from_points(const std::vector<Point>& pts) {
  if (pts.empty()) return PointSet();
  PointSet out(pts.front().size(), static_cast<Eigen::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    require(pts[i].size() == out.dim(), "point set: mixed dimensions");
    out[static_cast<Eigen::Index>(i)] = pts[i];
  }
  return out;
}

PolytopeH::PolytopeH(Eigen::MatrixXd a_, Eigen::VectorXd b_) : a(std::move(a_)), b(std::move(b_)) {
  require(a.rows() == b.size(), "polytope: facet matrix and offsets disagree");
  require(a.cols() >= 1, "polytope: dimension must be at least 1");
  require(a.allFinite() && b.allFinite(), "polytope: non-finite facet data");
}

PolytopeH PolytopeH::box(const Eigen::VectorXd& lo, const Eigen::VectorXd& hi) {
  require(lo.size() == hi.size() && lo.size() >= 1, "box: bad bounds");
  const Eigen::Index d = lo.size();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(2 * d, d);
  Eigen::VectorXd b(2 * d);
  for (Eigen::Index k = 0; k < d; ++k) {
    a(2 * k, k) = 1.0;
    b(2 * k) = hi(k);
    a(2 * k + 1, k) = -1.0;
    b(2 * k + 1) = -lo(k);
  }
  return PolytopeH(std::move(a), std::move(b));
}

PolytopeH PolytopeH::cube(Eigen::Index dim, double half_width) {
  return box(Eigen::VectorXd::Constant(dim, -half_width), Eigen::VectorXd::Constant(dim, half_width));
}

bool PolytopeH::contains(const Eigen::Ref<const Eigen::VectorXd>& x, double tol) const {
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    if (a.row(i).dot(x) > b(i) + tol) return false;
  }
  return true;
}

PolytopeH PolytopeH::with_facet(const Eigen::VectorXd& normal, double offset) const {
  require(normal.size() == dim(), "polytope: facet dimension mismatch");
  Eigen::MatrixXd a2(a.rows() + 1, a.cols());
  a2.topRows(a.rows()) = a;
  a2.row(a.rows()) = normal.transpose();
  Eigen::VectorXd b2(b.size() + 1);
  b2.head(b.size()) = b;
  b2(b.size()) = offset;
  return PolytopeH(std::move(a2), std::move(b2));
}

double unit_ball_volume(int d) {
  require(d >= 1, "unit_ball_volume: dimension must be >= 1");
  const double half = 0.5 * d;
  return std::pow(std::numbers::pi, half) / std::tgamma(half + 1.0);
}

namespace {

double facet_slack(const PolytopeH& p, Eigen::Index i, const Eigen::Ref<const Eigen::VectorXd>& x) {
  return (p.b(i) - p.a.row(i).dot(x)) / p.a.row(i).norm();
}

double min_facet_distance(const PolytopeH& p, const Eigen::Ref<const Eigen::VectorXd>& x) {
  double r = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < p.facet_count(); ++i) r = std::min(r, facet_slack(p, i, x));
  return r;
}

// Extreme points of {x : a x <= b} along +-e_k.
std::vector<Eigen::VectorXd> axis_extremes(const Eigen::MatrixXd& a, const Eigen::VectorXd& b, bool& bounded,
                                           bool& feasible) {
  const Eigen::Index d = a.cols();
  std::vector<bool> free_vars(static_cast<std::size_t>(d), false);
  std::vector<Eigen::VectorXd> out;
  bounded = true;
  feasible = true;
  for (Eigen::Index k = 0; k < d; ++k) {
    for (double s : {1.0, -1.0}) {
      Eigen::VectorXd c = Eigen::VectorXd::Zero(d);
      c(k) = s;
      const auto sol = lp::maximize(c, a, b, free_vars);
      if (sol.status == lp::Status::infeasible) {
        feasible = false;
        return out;
      }
      if (sol.status == lp::Status::unbounded) {
        bounded = false;
        return out;
      }
      out.push_back(sol.x);
    }
  }
  return out;
}

}  // namespace

InscribedBall chebyshev_center(const PolytopeH& p) {
  const Eigen::Index d = p.dim();
  const Eigen::Index m = p.facet_count();
  require(m >= 1, "chebyshev_center: polytope has no facets");
  Eigen::MatrixXd a(m, d + 1);
  a.leftCols(d) = p.a;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double norm = p.a.row(i).norm();
    require(norm > 0.0, "chebyshev_center: zero facet normal");
    a(i, d) = norm;
  }
  Eigen::VectorXd c = Eigen::VectorXd::Zero(d + 1);
  c(d) = 1.0;
  std::vector<bool> nonneg(static_cast<std::size_t>(d + 1), false);
  nonneg.back() = true;
  const auto sol = lp::maximize(c, a, p.b, nonneg);
  if (sol.status == lp::Status::infeasible) fail(ErrorKind::empty_polytope, "no point satisfies every facet");
  if (sol.status == lp::Status::unbounded) fail(ErrorKind::unbounded_polytope, "inscribed radius is unbounded");

  const double r_star = sol.x(d);
  Eigen::VectorXd center = sol.x.head(d);

  // The optimal centers may form a face (e.g. a long rectangle); pick the mean
  // of that face's extreme points along the axes it actually extends in.
  const double tau = 1e-10 * std::max(1.0, r_star);
  Eigen::VectorXd shrunk = p.b - a.col(d) * (r_star - tau);
  bool bounded = false;
  bool feasible = false;
  const auto ext = axis_extremes(p.a, shrunk, bounded, feasible);
  if (bounded && feasible) {
    Eigen::VectorXd sum = Eigen::VectorXd::Zero(d);
    int used = 0;
    for (Eigen::Index k = 0; k < d; ++k) {
      const auto& hi = ext[static_cast<std::size_t>(2 * k)];
      const auto& lo = ext[static_cast<std::size_t>(2 * k + 1)];
      if (hi(k) - lo(k) > 1e-7 * std::max(1.0, r_star)) {
        sum += hi + lo;
        used += 2;
      }
    }
    if (used > 0) center = sum / used;
  }
  InscribedBall out;
  out.radius = std::max(0.0, min_facet_distance(p, center));
  out.center = std::move(center);
  return out;
}

AxisBox bounding_box(const PolytopeH& p) {
  bool bounded = false;
  bool feasible = false;
  const auto ext = axis_extremes(p.a, p.b, bounded, feasible);
  if (!feasible) fail(ErrorKind::empty_polytope, "bounding box of an empty polytope");
  if (!bounded) fail(ErrorKind::unbounded_polytope, "polytope is not bounded");
  AxisBox box{Eigen::VectorXd(p.dim()), Eigen::VectorXd(p.dim())};
  for (Eigen::Index k = 0; k < p.dim(); ++k) {
    box.hi(k) = ext[static_cast<std::size_t>(2 * k)](k);
    box.lo(k) = ext[static_cast<std::size_t>(2 * k + 1)](k);
  }
  return box;
}

// ---------------------------------------------------------------------------
// Minimal enclosing ball

namespace {

Ball circumball(const PointSet& pts, const std::vector<Eigen::Index>& support) {
  const Eigen::Index d = pts.dim();
  Ball ball;
  if (support.empty()) {
    ball.center = Eigen::VectorXd::Zero(d);
    ball.radius = -1.0;
    return ball;
  }
  const Eigen::VectorXd q0 = pts[support[0]];
  const auto k = static_cast<Eigen::Index>(support.size()) - 1;
  if (k == 0) {
    ball.center = q0;
    ball.radius = 0.0;
    return ball;
  }
  Eigen::MatrixXd diffs(d, k);
  for (Eigen::Index j = 0; j < k; ++j) diffs.col(j) = pts[support[static_cast<std::size_t>(j + 1)]] - q0;
  const Eigen::MatrixXd gram = diffs.transpose() * diffs;
  const Eigen::VectorXd rhs = 0.5 * gram.diagonal();
  const Eigen::VectorXd lambda = gram.completeOrthogonalDecomposition().solve(rhs);
  ball.center = q0 + diffs * lambda;
  ball.radius = 0.0;
  for (Eigen::Index s : support) ball.radius = std::max(ball.radius, (pts[s] - ball.center).norm());
  return ball;
}

bool inside(const Ball& ball, const Eigen::Ref<const Eigen::VectorXd>& p) {
  if (ball.radius < 0) return false;
  return (p - ball.center).norm() <= ball.radius * (1.0 + 1e-12) + 1e-15;
}

Ball move_to_front(const PointSet& pts, std::list<Eigen::Index>& order, std::list<Eigen::Index>::iterator end,
                   std::vector<Eigen::Index>& support) {
  Ball ball = circumball(pts, support);
  if (static_cast<Eigen::Index>(support.size()) == pts.dim() + 1) return ball;
  for (auto it = order.begin(); it != end;) {
    auto next = std::next(it);
    if (!inside(ball, pts[*it])) {
      support.push_back(*it);
      ball = move_to_front(pts, order, it, support);
      support.pop_back();
      order.splice(order.begin(), order, it);
    }
    it = next;
  }
  return ball;
}

}  // namespace

Ball enclosing_ball(const PointSet& pts) {
  require(!pts.empty(), "enclosing_ball: empty point list");
  std::list<Eigen::Index> order;
  for (Eigen::Index i = 0; i < pts.size(); ++i) order.push_back(i);
  std::vector<Eigen::Index> support;
  Ball ball = move_to_front(pts, order, order.end(), support);
  // Report the radius actually needed by the computed center.
  double r = 0.0;
  for (Eigen::Index i = 0; i < pts.size(); ++i) r = std::max(r, (pts[i] - ball.center).norm());
  ball.radius = r;
  return ball;
}

// ---------------------------------------------------------------------------
// Vertices, diameter, volume

namespace detail {

std::vector<Point> vertices_unchecked(const PolytopeH& p) {
  const Eigen::Index d = p.dim();
  const Eigen::Index m = p.facet_count();
  if (d > kMaxExactDim) {
    fail(ErrorKind::unsupported_dimension, "vertex enumeration supports d <= 4, got d = " + std::to_string(d));
  }
  std::vector<Point> out;
  if (m < d) return out;

  std::vector<Eigen::Index> idx(static_cast<std::size_t>(d));
  for (Eigen::Index k = 0; k < d; ++k) idx[static_cast<std::size_t>(k)] = k;
  Eigen::MatrixXd sub(d, d);
  Eigen::VectorXd rhs(d);
  while (true) {
    for (Eigen::Index k = 0; k < d; ++k) {
      sub.row(k) = p.a.row(idx[static_cast<std::size_t>(k)]) / p.a.row(idx[static_cast<std::size_t>(k)]).norm();
      rhs(k) = p.b(idx[static_cast<std::size_t>(k)]) / p.a.row(idx[static_cast<std::size_t>(k)]).norm();
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(sub);
    lu.setThreshold(1e-10);
    if (lu.rank() == d) {
      const Eigen::VectorXd x = lu.solve(rhs);
      bool feasible = x.allFinite();
      for (Eigen::Index i = 0; feasible && i < m; ++i) feasible = facet_slack(p, i, x) >= -1e-9;
      if (feasible) {
        const bool dup = std::any_of(out.begin(), out.end(), [&](const Point& v) {
          return (v - x).lpNorm<Eigen::Infinity>() <= 1e-9;
        });
        if (!dup) out.push_back(x);
      }
    }
    // next combination
    Eigen::Index k = d - 1;
    while (k >= 0 && idx[static_cast<std::size_t>(k)] == m - d + k) --k;
    if (k < 0) break;
    ++idx[static_cast<std::size_t>(k)];
    for (Eigen::Index j = k + 1; j < d; ++j) idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
  std::sort(out.begin(), out.end(), [](const Point& u, const Point& v) {
    return std::lexicographical_compare(u.data(), u.data() + u.size(), v.data(), v.data() + v.size());
  });
  return out;
}

}  // namespace detail

std::vector<Point> polytope_vertices(const PolytopeH& p) {
  if (p.dim() > kMaxExactDim) {
    fail(ErrorKind::unsupported_dimension, "vertex enumeration supports d <= 4, got d = " + std::to_string(p.dim()));
  }
  bounding_box(p);
  return detail::vertices_unchecked(p);
}

namespace {

double diameter_of(const std::vector<Point>& verts) {
  double best = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) best = std::max(best, (verts[i] - verts[j]).norm());
  }
  return best;
}

}  // namespace

double polytope_diameter(const PolytopeH& p) { return diameter_of(polytope_vertices(p)); }

double convex_polygon_area(std::vector<Point> vertices) {
  if (vertices.size() < 3) return 0.0;
  Eigen::Vector2d centroid = Eigen::Vector2d::Zero();
  for (const auto& v : vertices) centroid += v.head<2>();
  centroid /= static_cast<double>(vertices.size());
  std::sort(vertices.begin(), vertices.end(), [&](const Point& u, const Point& v) {
    return std::atan2(u(1) - centroid(1), u(0) - centroid(0)) < std::atan2(v(1) - centroid(1), v(0) - centroid(0));
  });
  double twice = 0.0;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    const auto& u = vertices[i];
    const auto& v = vertices[(i + 1) % vertices.size()];
    twice += u(0) * v(1) - v(0) * u(1);
  }
  return 0.5 * std::abs(twice);
}

VolumeEstimate polytope_volume(const PolytopeH& p, const VolumeRequest& req, kernels::Exec exec) {
  const Eigen::Index d = p.dim();
  VolumeEstimate est;
  if (req.exact) {
    est.method = VolumeMethod::exact;
    if (d == 1) {
      const AxisBox box = bounding_box(p);
      est.value = std::max(0.0, box.hi(0) - box.lo(0));
    } else if (d == 2) {
      est.value = convex_polygon_area(polytope_vertices(p));
    } else {
      fail(ErrorKind::invalid_argument, "exact volume is available for d <= 2 only");
    }
    return est;
  }
  require(req.n_samples > 0, "polytope_volume: Monte Carlo needs n_samples > 0");
  AxisBox box;
  if (d <= kMaxExactDim) {
    const auto verts = polytope_vertices(p);
    if (verts.empty()) fail(ErrorKind::empty_polytope, "polytope has no vertices");
    const Ball ball = enclosing_ball(PointSet::from_points(verts));
    box.lo = ball.center.array() - ball.radius;
    box.hi = ball.center.array() + ball.radius;
  } else {
    box = bounding_box(p);
  }
  const std::uint64_t hits = kernels::count_hits(exec, p, box, req.n_samples, req.seed);
  const double n = static_cast<double>(req.n_samples);
  const double frac = static_cast<double>(hits) / n;
  const double box_vol = box.volume();
  est.method = VolumeMethod::monte_carlo;
  est.value = box_vol * frac;
  est.std_error = box_vol * std::sqrt(frac * (1.0 - frac) / n);
  return est;
}

PolytopeH simplify(const PolytopeH& p) {
  if (p.dim() > kMaxExactDim) return p;
  const auto verts = detail::vertices_unchecked(p);
  if (verts.empty()) return p;
  std::vector<Eigen::Index> keep;
  std::vector<Eigen::VectorXd> seen;
  for (Eigen::Index i = 0; i < p.facet_count(); ++i) {
    Eigen::VectorXd normalized(p.dim() + 1);
    const double norm = p.a.row(i).norm();
    normalized.head(p.dim()) = p.a.row(i).transpose() / norm;
    normalized(p.dim()) = p.b(i) / norm;
    const bool dup = std::any_of(seen.begin(), seen.end(), [&](const Eigen::VectorXd& s) {
      return (s - normalized).lpNorm<Eigen::Infinity>() <= 1e-12;
    });
    if (dup) continue;
    Eigen::Index touching = 0;
    for (const auto& v : verts) touching += std::abs(facet_slack(p, i, v)) <= 1e-9 ? 1 : 0;
    if (touching >= p.dim()) {
      keep.push_back(i);
      seen.push_back(normalized);
    }
  }
  if (static_cast<Eigen::Index>(keep.size()) == p.facet_count()) return p;
  Eigen::MatrixXd a(static_cast<Eigen::Index>(keep.size()), p.dim());
  Eigen::VectorXd b(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t r = 0; r < keep.size(); ++r) {
    a.row(static_cast<Eigen::Index>(r)) = p.a.row(keep[r]);
    b(static_cast<Eigen::Index>(r)) = p.b(keep[r]);
  }
  return PolytopeH(std::move(a), std::move(b));
}

namespace {

bool degenerate(const PolytopeH& p) {
  try {
    return chebyshev_center(p).radius <= kDegenerateRadius;
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::empty_polytope) return true;
    throw;
  }
}

}  // namespace

CutResult cut(const PolytopeH& p, const Hyperplane& h) {
  require(h.normal.size() == p.dim(), "cut: hyperplane dimension mismatch");
  require(h.normal.norm() > 0.0, "cut: zero hyperplane normal");
  CutResult out;
  out.below = p.with_facet(h.normal, h.offset);
  out.above = p.with_facet(-h.normal, -h.offset);
  out.below_degenerate = degenerate(out.below);
  out.above_degenerate = degenerate(out.above);
  if (!out.below_degenerate) out.below = simplify(out.below);
  if (!out.above_degenerate) out.above = simplify(out.above);
  return out;
}

double covering_radius(const PointSet& train, const PointSet& domain_grid, kernels::Exec exec) {
  if (domain_grid.empty()) return 0.0;
  if (train.empty()) return std::numeric_limits<double>::infinity();
  require(train.dim() == domain_grid.dim(), "covering_radius: dimension mismatch");
  const KdTree tree(train);
  return kernels::max_nearest_distance(exec, tree, domain_grid);
}

DensityCheck is_gamma_dense(const PointSet& train, const PointSet& domain_grid, double gamma, kernels::Exec exec) {
  require(gamma > 0.0, "is_gamma_dense: gamma must be positive");
  DensityCheck out;
  const double d = static_cast<double>(train.empty() ? domain_grid.dim() : train.dim());
  out.count_ok = static_cast<double>(train.size()) * gamma >= d;
  out.count_warning = !out.count_ok;
  if (train.empty()) {
    out.dense = false;
    out.worst_gap = std::numeric_limits<double>::infinity();
    return out;
  }
  out.worst_gap = covering_radius(train, domain_grid, exec);
  out.dense = out.worst_gap <= gamma;
  return out;
}

PointSet ball_grid(int d, double spacing) {
  require(d >= 1, "ball_grid: dimension must be >= 1");
  require(spacing > 0.0 && spacing <= 2.0, "ball_grid: spacing must be in (0, 2]");
  const long k_max = static_cast<long>(std::floor(1.0 / spacing + 1e-9)) + 1;
  const long side = 2 * k_max + 1;
  std::vector<double> inner;
  std::vector<double> shell;
  std::set<std::vector<long long>> seen;
  Eigen::VectorXd p(d);
  std::vector<long> idx(static_cast<std::size_t>(d), -k_max);
  const auto key = [](const Eigen::VectorXd& v) {
    std::vector<long long> k(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) k[static_cast<std::size_t>(i)] = std::llround(v(i) * 1e9);
    return k;
  };
  long total = 1;
  for (int i = 0; i < d; ++i) total *= side;
  for (long n = 0; n < total; ++n) {
    long rem = n;
    for (int k = 0; k < d; ++k) {
      p(k) = static_cast<double>(rem % side - k_max) * spacing;
      rem /= side;
    }
    const double r = p.norm();
    if (r <= 1.0 + 1e-12) {
      if (seen.insert(key(p)).second) inner.insert(inner.end(), p.data(), p.data() + d);
    } else if (r <= 1.0 + spacing) {
      const Eigen::VectorXd q = p / r;
      if (seen.insert(key(q)).second) shell.insert(shell.end(), q.data(), q.data() + d);
    }
  }
  inner.insert(inner.end(), shell.begin(), shell.end());
  const auto n_pts = static_cast<Eigen::Index>(inner.size()) / d;
  return PointSet(Eigen::Map<Eigen::MatrixXd>(inner.data(), d, n_pts));
}

}  // namespace adacover

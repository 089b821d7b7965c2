#pragma once

// Slow, independent reference computations used to cross-check the library.
// Nothing here calls into adacover; everything is brute force on plain
// arrays so a bug in the LP or the miniball code cannot hide in both.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

namespace oracle {

using P2 = std::array<double, 2>;

// Half-plane n.x <= b in the plane.
struct HalfPlane {
  double nx, ny, b;
};

inline double facet_distance(const HalfPlane& h, double x, double y) {
  return (h.b - h.nx * x - h.ny * y) / std::hypot(h.nx, h.ny);
}

struct Center2 {
  double x, y, r;
};

// Largest inscribed circle by zooming grid search over min facet distance.
// Accurate to about 1e-9 for well-shaped polygons.
inline Center2 grid_chebyshev(const std::vector<HalfPlane>& hs, double lo_x, double hi_x, double lo_y,
                              double hi_y) {
  Center2 best{0, 0, -std::numeric_limits<double>::infinity()};
  double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  double hx = 0.5 * (hi_x - lo_x), hy = 0.5 * (hi_y - lo_y);
  const int n = 40;
  for (int round = 0; round < 60; ++round) {
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double x = cx - hx + 2 * hx * i / n;
        const double y = cy - hy + 2 * hy * j / n;
        double r = std::numeric_limits<double>::infinity();
        for (const auto& h : hs) r = std::min(r, facet_distance(h, x, y));
        if (r > best.r) best = {x, y, r};
      }
    }
    cx = best.x;
    cy = best.y;
    hx *= 0.5;
    hy *= 0.5;
  }
  return best;
}

// Smallest enclosing circle radius: min over a zooming grid of the max
// distance to the points. The objective is convex, so zooming converges.
inline double brute_enclosing_radius(const std::vector<P2>& pts) {
  double lo_x = pts[0][0], hi_x = lo_x, lo_y = pts[0][1], hi_y = lo_y;
  for (const auto& p : pts) {
    lo_x = std::min(lo_x, p[0]);
    hi_x = std::max(hi_x, p[0]);
    lo_y = std::min(lo_y, p[1]);
    hi_y = std::max(hi_y, p[1]);
  }
  double cx = 0.5 * (lo_x + hi_x), cy = 0.5 * (lo_y + hi_y);
  double h = std::max(hi_x - lo_x, hi_y - lo_y) + 1e-12;
  double best = std::numeric_limits<double>::infinity();
  const int n = 30;
  for (int round = 0; round < 80; ++round) {
    double bx = cx, by = cy;
    for (int i = 0; i <= n; ++i) {
      for (int j = 0; j <= n; ++j) {
        const double x = cx - h + 2 * h * i / n;
        const double y = cy - h + 2 * h * j / n;
        double r = 0;
        for (const auto& p : pts) r = std::max(r, std::hypot(p[0] - x, p[1] - y));
        if (r < best) {
          best = r;
          bx = x;
          by = y;
        }
      }
    }
    cx = bx;
    cy = by;
    h *= 0.6;
  }
  return best;
}

// Exact inscribed circle of a bounded polygon: the optimum is equidistant
// from three facet lines, so try every triple (Cramer's rule) and keep the
// feasible one with the largest radius.
inline Center2 triple_chebyshev(const std::vector<HalfPlane>& hs) {
  Center2 best{0, 0, -std::numeric_limits<double>::infinity()};
  const std::size_t n = hs.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      for (std::size_t k = j + 1; k < n; ++k) {
        // rows: nx x + ny y + |n| r = b
        const HalfPlane* h[3] = {&hs[i], &hs[j], &hs[k]};
        double m[3][4];
        for (int q = 0; q < 3; ++q) {
          m[q][0] = h[q]->nx;
          m[q][1] = h[q]->ny;
          m[q][2] = std::hypot(h[q]->nx, h[q]->ny);
          m[q][3] = h[q]->b;
        }
        auto det3 = [](double a[3][3]) {
          return a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
                 a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
                 a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
        };
        double base[3][3];
        for (int r = 0; r < 3; ++r)
          for (int c = 0; c < 3; ++c) base[r][c] = m[r][c];
        const double det = det3(base);
        if (std::abs(det) < 1e-14) continue;
        double sol[3];
        for (int c = 0; c < 3; ++c) {
          double a[3][3];
          for (int r = 0; r < 3; ++r)
            for (int cc = 0; cc < 3; ++cc) a[r][cc] = cc == c ? m[r][3] : m[r][cc];
          sol[c] = det3(a) / det;
        }
        bool ok = true;
        for (const auto& hp : hs) ok = ok && facet_distance(hp, sol[0], sol[1]) >= sol[2] - 1e-12;
        if (ok && sol[2] > best.r) best = {sol[0], sol[1], sol[2]};
      }
  return best;
}

// Smallest enclosing circle by exhaustion: the optimum is the diametral
// circle of a pair or the circumcircle of a triple.
inline double exhaustive_enclosing_radius(const std::vector<P2>& pts) {
  double best = std::numeric_limits<double>::infinity();
  auto covers = [&](double x, double y, double r) {
    for (const auto& p : pts)
      if (std::hypot(p[0] - x, p[1] - y) > r * (1 + 1e-12) + 1e-15) return false;
    return true;
  };
  if (pts.size() == 1) return 0.0;
  const std::size_t n = pts.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double x = 0.5 * (pts[i][0] + pts[j][0]), y = 0.5 * (pts[i][1] + pts[j][1]);
      const double r = 0.5 * std::hypot(pts[i][0] - pts[j][0], pts[i][1] - pts[j][1]);
      if (r < best && covers(x, y, r)) best = r;
      for (std::size_t k = j + 1; k < n; ++k) {
        const double ax = pts[i][0], ay = pts[i][1];
        const double bx = pts[j][0] - ax, by = pts[j][1] - ay;
        const double cx = pts[k][0] - ax, cy = pts[k][1] - ay;
        const double dd = 2 * (bx * cy - by * cx);
        if (std::abs(dd) < 1e-14) continue;
        const double b2 = bx * bx + by * by, c2 = cx * cx + cy * cy;
        const double ux = (cy * b2 - by * c2) / dd, uy = (bx * c2 - cx * b2) / dd;
        const double rr = std::hypot(ux, uy);
        if (rr < best && covers(ax + ux, ay + uy, rr)) best = rr;
      }
    }
  return best;
}

// Shoelace formula; vertices must be in boundary order.
inline double shoelace(const std::vector<P2>& poly) {
  double s = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const auto& a = poly[i];
    const auto& b = poly[(i + 1) % poly.size()];
    s += a[0] * b[1] - a[1] * b[0];
  }
  return 0.5 * std::abs(s);
}

// Sutherland-Hodgman: keep the part of a convex polygon with n.x <= b.
inline std::vector<P2> clip(const std::vector<P2>& poly, const HalfPlane& h) {
  std::vector<P2> out;
  auto side = [&](const P2& p) { return h.nx * p[0] + h.ny * p[1] - h.b; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const P2& a = poly[i];
    const P2& b = poly[(i + 1) % poly.size()];
    const double sa = side(a), sb = side(b);
    if (sa <= 0) out.push_back(a);
    if ((sa < 0 && sb > 0) || (sa > 0 && sb < 0)) {
      const double t = sa / (sa - sb);
      out.push_back({a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])});
    }
  }
  return out;
}

// Polygon of the intersection of half-planes, by clipping a huge box.
inline std::vector<P2> polygon_of(const std::vector<HalfPlane>& hs, double big = 1e3) {
  std::vector<P2> poly = {{-big, -big}, {big, -big}, {big, big}, {-big, big}};
  for (const auto& h : hs) poly = clip(poly, h);
  return poly;
}

// Hand enumeration of the interval refinement: an interval is cut at its
// midpoint (the inscribed center of a segment) while its half-length exceeds
// the target. Returns the leaves left to right.
inline void refine_interval(double lo, double hi, double target, std::vector<std::pair<double, double>>& leaves,
                            int& cuts) {
  if (0.5 * (hi - lo) <= target) {
    leaves.emplace_back(lo, hi);
    return;
  }
  ++cuts;
  const double mid = 0.5 * (lo + hi);
  refine_interval(lo, mid, target, leaves, cuts);
  refine_interval(mid, hi, target, leaves, cuts);
}

// Area of the lens B(c, g) n B(0, 1) by midpoint quadrature on a fine grid;
// used only for loose (1e-4) cross-checks.
inline double lens_area_quadrature(double cx, double cy, double g, int n = 4000) {
  const double h = 2 * g / n;
  double area = 0;
  for (int i = 0; i < n; ++i) {
    const double x = cx - g + (i + 0.5) * h;
    // exact chord lengths in y avoid a second quadrature dimension
    const double dx = x - cx;
    const double half = std::sqrt(std::max(0.0, g * g - dx * dx));
    const double lo1 = cy - half, hi1 = cy + half;
    const double half2 = std::sqrt(std::max(0.0, 1 - x * x));
    const double lo = std::max(lo1, -half2), hi = std::min(hi1, half2);
    if (hi > lo) area += (hi - lo) * h;
  }
  return area;
}

}  // namespace oracle

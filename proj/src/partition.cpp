#include "adacover/partition.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <string>

#include "adacover/error.hpp"
#include "adacover/kernels.hpp"

namespace adacover {

namespace {

constexpr double kRadiusSlack = 1e-12;

bool lex_less(const Eigen::VectorXd& u, const Eigen::VectorXd& v) {
  for (Eigen::Index k = 0; k < u.size(); ++k) {
    if (u(k) < v(k) - 1e-12) return true;
    if (u(k) > v(k) + 1e-12) return false;
  }
  return false;
}

Eigen::VectorXd canonical_direction(Eigen::VectorXd v) {
  v.normalize();
  for (Eigen::Index k = 0; k < v.size(); ++k) {
    if (std::abs(v(k)) > 1e-12) {
      if (v(k) < 0) v = -v;
      break;
    }
  }
  return v;
}

}  // namespace

std::vector<int> RefinementTree::leaves() const {
  std::vector<int> out;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].is_leaf()) out.push_back(static_cast<int>(i));
  }
  return out;
}

int RefinementTree::internal_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const RefinementNode& n) { return !n.is_leaf(); }));
}

int RefinementTree::height() const {
  if (nodes.empty()) return 0;
  int deepest = nodes.front().depth;
  for (const auto& n : nodes) deepest = std::max(deepest, n.depth);
  return deepest - nodes.front().depth;
}

int RefinementTree::sliver_count() const {
  return static_cast<int>(std::count_if(nodes.begin(), nodes.end(), [](const RefinementNode& n) { return n.sliver; }));
}

double RefinementTree::max_leaf_radius() const {
  double r = 0.0;
  for (const auto& n : nodes) {
    if (n.is_leaf()) r = std::max(r, n.enclosing_radius);
  }
  return r;
}

Hyperplane choose_cut(const PolytopeH& p) {
  const InscribedBall anchor = chebyshev_center(p);
  if (anchor.radius <= kDegenerateRadius) {
    fail(ErrorKind::degenerate_polytope, "cannot cut a polytope with inscribed radius " + std::to_string(anchor.radius));
  }
  const auto verts = polytope_vertices(p);
  double longest = 0.0;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) longest = std::max(longest, (verts[i] - verts[j]).norm());
  }
  if (longest <= 0.0) fail(ErrorKind::degenerate_polytope, "polytope has zero diameter");
  std::optional<Eigen::VectorXd> best;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) {
      const Eigen::VectorXd diff = verts[j] - verts[i];
      if (diff.norm() < longest * (1.0 - 1e-12)) continue;
      Eigen::VectorXd dir = canonical_direction(diff);
      if (!best || lex_less(dir, *best)) best = std::move(dir);
    }
  }
  Hyperplane h;
  h.normal = *best;
  h.offset = h.normal.dot(anchor.center);
  return h;
}

RefinementNode make_node(PolytopeH p, int depth, double zeta_min) {
  RefinementNode node;
  const auto verts = polytope_vertices(p);
  if (verts.empty()) fail(ErrorKind::empty_polytope, "polytope has no vertices");
  node.enclosing_radius = enclosing_ball(PointSet::from_points(verts)).radius;
  const InscribedBall ball = chebyshev_center(p);
  node.anchor = ball.center;
  node.inscribed_radius = ball.radius;
  for (std::size_t i = 0; i < verts.size(); ++i) {
    for (std::size_t j = i + 1; j < verts.size(); ++j) node.diameter = std::max(node.diameter, (verts[i] - verts[j]).norm());
  }
  node.zeta = node.diameter > 0.0 ? std::min(1.0, node.inscribed_radius / (0.5 * node.diameter)) : 0.0;
  node.sliver = node.zeta < zeta_min;
  node.depth = depth;
  node.polytope = std::move(p);
  return node;
}

void refine_node(RefinementTree& tree, int node, double target_radius) {
  require(node >= 0 && static_cast<std::size_t>(node) < tree.nodes.size(), "refine_node: node index out of range");
  if (!(target_radius > 0.0)) {
    fail(ErrorKind::refinement_stalled, "target radius must be positive, got " + std::to_string(target_radius));
  }
  const int start_depth = tree.nodes[static_cast<std::size_t>(node)].depth;
  std::deque<int> queue{node};
  while (!queue.empty()) {
    const int id = queue.front();
    queue.pop_front();
    const auto idx = static_cast<std::size_t>(id);
    if (tree.nodes[idx].enclosing_radius <= target_radius * (1.0 + kRadiusSlack)) continue;
    if (tree.nodes[idx].depth - start_depth >= kMaxRefineDepth) {
      fail(ErrorKind::refinement_stalled, "depth cap of " + std::to_string(kMaxRefineDepth) + " reached");
    }
    const Hyperplane h = choose_cut(tree.nodes[idx].polytope);
    CutResult parts = cut(tree.nodes[idx].polytope, h);
    if (parts.below_degenerate || parts.above_degenerate) {
      fail(ErrorKind::refinement_stalled, "anchor cut produced a degenerate piece");
    }
    const int depth = tree.nodes[idx].depth + 1;
    RefinementNode below = make_node(std::move(parts.below), depth, tree.zeta_min);
    RefinementNode above = make_node(std::move(parts.above), depth, tree.zeta_min);
    below.parent = id;
    above.parent = id;
    const int first = static_cast<int>(tree.nodes.size());
    tree.nodes.push_back(std::move(below));
    tree.nodes.push_back(std::move(above));
    tree.nodes[idx].cut = h;
    tree.nodes[idx].children = std::array<int, 2>{first, first + 1};
    queue.push_back(first);
    queue.push_back(first + 1);
  }
}

RefinementTree refine_until(const PolytopeH& p, double target_radius, double zeta_min) {
  if (!(target_radius > 0.0)) {
    fail(ErrorKind::refinement_stalled, "target radius must be positive, got " + std::to_string(target_radius));
  }
  RefinementTree tree;
  tree.zeta_min = zeta_min;
  tree.nodes.push_back(make_node(p, 0, zeta_min));
  refine_node(tree, 0, target_radius);
  return tree;
}

LevelResult refine_level(const std::vector<PolytopeH>& partition, kernels::Exec exec) {
  LevelResult out;
  if (partition.empty()) return out;
  out.trees.resize(partition.size());
  kernels::for_each(exec, partition.size(), [&](std::size_t i) {
    RefinementTree tree;
    tree.nodes.push_back(make_node(partition[i], 0));
    refine_node(tree, 0, 0.5 * tree.nodes.front().enclosing_radius);
    out.trees[i] = std::move(tree);
  });
  const long d = static_cast<long>(partition.front().dim());
  for (const auto& tree : out.trees) {
    out.radius_before = std::max(out.radius_before, tree.nodes.front().enclosing_radius);
    out.radius_after = std::max(out.radius_after, tree.max_leaf_radius());
    out.k_p.push_back(tree.height());
    out.beta = std::max(out.beta, tree.height());
    out.cuts += tree.internal_count();
    for (int leaf : tree.leaves()) out.partition.push_back(tree.nodes[static_cast<std::size_t>(leaf)].polytope);
  }
  out.param_increment = (d + 1) * out.cuts;
  return out;
}

MultiLevelRefinement refine_levels(const PolytopeH& p, double target_radius, int max_levels, kernels::Exec exec) {
  if (!(target_radius > 0.0)) {
    fail(ErrorKind::refinement_stalled, "target radius must be positive, got " + std::to_string(target_radius));
  }
  require(max_levels >= 0, "refine_levels: max_levels must be >= 0");
  MultiLevelRefinement out;
  RefinementTree& tree = out.tree;
  RefinementStats& stats = out.stats;
  tree.nodes.push_back(make_node(p, 0));
  std::vector<int> frontier{0};
  double radius = tree.nodes.front().enclosing_radius;
  stats.level_radii.push_back(radius);
  stats.level_params.push_back(0);
  stats.level_alpha.push_back(0.0);
  const long d = static_cast<long>(p.dim());

  for (int level = 0; level < max_levels && radius > target_radius * (1.0 + kRadiusSlack); ++level) {
    std::vector<PolytopeH> polys;
    polys.reserve(frontier.size());
    for (int id : frontier) polys.push_back(tree.nodes[static_cast<std::size_t>(id)].polytope);
    LevelResult step = refine_level(polys, exec);

    std::vector<int> next;
    for (std::size_t r = 0; r < step.trees.size(); ++r) {
      const RefinementTree& sub = step.trees[r];
      const int root = frontier[r];
      const int base_depth = tree.nodes[static_cast<std::size_t>(root)].depth;
      // sub node 0 is the existing global node; the rest are appended in order.
      std::vector<int> map(sub.nodes.size());
      map[0] = root;
      for (std::size_t j = 1; j < sub.nodes.size(); ++j) {
        map[j] = static_cast<int>(tree.nodes.size());
        RefinementNode node = sub.nodes[j];
        node.depth += base_depth;
        node.parent = map[static_cast<std::size_t>(node.parent)];
        tree.nodes.push_back(std::move(node));
      }
      for (std::size_t j = 0; j < sub.nodes.size(); ++j) {
        auto& node = tree.nodes[static_cast<std::size_t>(map[j])];
        node.cut = sub.nodes[j].cut;
        if (sub.nodes[j].children) {
          const auto [lo, hi] = *sub.nodes[j].children;
          node.children = std::array<int, 2>{map[static_cast<std::size_t>(lo)], map[static_cast<std::size_t>(hi)]};
        }
      }
      for (int leaf : sub.leaves()) next.push_back(map[static_cast<std::size_t>(leaf)]);
    }
    frontier = std::move(next);

    radius = step.radius_after;
    stats.k_p.insert(stats.k_p.end(), step.k_p.begin(), step.k_p.end());
    stats.beta = std::max(stats.beta, step.beta);
    stats.cut_count += step.cuts;
    const long w_prev = stats.level_params.back();
    const long w = w_prev + step.param_increment;
    const double alpha = static_cast<double>(w) / static_cast<double>(std::max(w_prev, 1L)) - 1.0;
    stats.level_radii.push_back(radius);
    stats.level_params.push_back(w);
    stats.level_alpha.push_back(alpha);
    stats.alpha_hat = std::max(stats.alpha_hat, alpha);
  }
  stats.param_count = (d + 1) * stats.cut_count;
  stats.sliver_count = tree.sliver_count();
  return out;
}

GrunbaumCheck grunbaum_check(const PolytopeH& parent, const PolytopeH& child, const VolumeRequest& req) {
  require(parent.dim() == child.dim(), "grunbaum_check: dimension mismatch");
  const int d = static_cast<int>(parent.dim());
  VolumeRequest child_req = req;
  if (!req.exact) child_req.seed = derive_seed(req.seed, StreamTag::volume, 1);
  const VolumeEstimate vp = polytope_volume(parent, req);
  const VolumeEstimate vc = polytope_volume(child, child_req);
  if (!(vp.value > 0.0)) fail(ErrorKind::degenerate_polytope, "parent polytope has zero volume");
  GrunbaumCheck out;
  out.bound = 1.0 - 1.0 / d;
  out.ratio = vc.value / vp.value;
  const double rel_c = vc.value > 0.0 ? vc.std_error / vc.value : 0.0;
  const double rel_p = vp.std_error / vp.value;
  out.std_error = out.ratio * std::sqrt(rel_c * rel_c + rel_p * rel_p);
  const double slack = req.exact ? 1e-9 : 3.0 * out.std_error;
  out.holds = out.ratio <= out.bound + slack;
  return out;
}

double eta_decay_bound(int k, int d, double vol_p, double zeta) {
  require(d >= 2, "eta_decay_bound: the bound needs d >= 2");
  require(k >= 0, "eta_decay_bound: depth must be >= 0");
  require(vol_p > 0.0, "eta_decay_bound: volume must be positive");
  require(zeta > 0.0 && zeta <= 1.0, "eta_decay_bound: zeta must lie in (0, 1]");
  const double shrink = std::pow(1.0 - 1.0 / d, k);
  return std::pow(shrink * vol_p / (std::pow(zeta, d) * unit_ball_volume(d)), 1.0 / d);
}

GammaParamRelation gamma_param_relation(const RefinementStats& stats) {
  require(stats.level_radii.size() >= 2 && stats.level_params.size() >= 2,
          "gamma_param_relation: needs at least one completed level");
  GammaParamRelation out;
  out.gamma_s = stats.level_radii.back();
  out.param_count = stats.level_params.back();
  out.alpha_hat = stats.alpha_hat;
  out.exponent = 1.0 / std::log2(1.0 + out.alpha_hat);
  out.bound = std::pow(static_cast<double>(out.param_count), -out.exponent);
  out.holds = out.gamma_s <= out.bound * (1.0 + 1e-12);
  out.alpha_one_holds = out.gamma_s * static_cast<double>(out.param_count) <= 1.0 + 1e-12;
  return out;
}

}  // namespace adacover

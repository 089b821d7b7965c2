#pragma once

#include <array>
#include <optional>
#include <vector>

#include "adacover/geometry.hpp"
#include "adacover/kernels_fwd.hpp"

namespace adacover {

inline constexpr int kMaxRefineDepth = 64;
inline constexpr double kDefaultZetaMin = 0.05;

struct RefinementNode {
  PolytopeH polytope;
  double enclosing_radius = 0.0;
  Point anchor;
  double inscribed_radius = 0.0;
  double diameter = 0.0;
  /// inscribed radius / half-diameter, in (0, 1].
  double zeta = 0.0;
  bool sliver = false;
  std::optional<Hyperplane> cut;
  std::optional<std::array<int, 2>> children;
  int depth = 0;
  int parent = -1;

  bool is_leaf() const { return !children.has_value(); }
};

/// Binary cut tree; node 0 is the root and children always follow parents.
struct RefinementTree {
  std::vector<RefinementNode> nodes;
  double zeta_min = kDefaultZetaMin;

  std::vector<int> leaves() const;
  int internal_count() const;
  /// Depth of the deepest leaf relative to the root (k_p).
  int height() const;
  int sliver_count() const;
  double max_leaf_radius() const;
};

/// Cut through the Chebyshev center, normal along the polytope's longest
/// vertex pair. Equal-length pairs resolve to the lexicographically smallest
/// unit normal after sign canonicalization (first nonzero component > 0).
Hyperplane choose_cut(const PolytopeH& p);

/// Measures one node's geometry (vertices, radii, anchor, zeta).
RefinementNode make_node(PolytopeH p, int depth, double zeta_min = kDefaultZetaMin);

/// Recursively cuts until every leaf has enclosing radius <= target_radius.
RefinementTree refine_until(const PolytopeH& p, double target_radius, double zeta_min = kDefaultZetaMin);

/// Expands leaf `node` of an existing tree in place.
void refine_node(RefinementTree& tree, int node, double target_radius);

struct LevelResult {
  std::vector<PolytopeH> partition;
  std::vector<RefinementTree> trees;  // one per input polytope, input order
  std::vector<int> k_p;
  int beta = 0;
  long cuts = 0;
  long param_increment = 0;  // (d + 1) * cuts
  double radius_before = 0.0;
  double radius_after = 0.0;
};

/// Refines every polytope to half its own enclosing radius. Roots are
/// independent and processed concurrently; results keep input order.
LevelResult refine_level(const std::vector<PolytopeH>& partition,
                         kernels::Exec exec = kernels::Exec::parallel);

struct RefinementStats {
  std::vector<int> k_p;  // k_p of every polytope refined, level by level
  int beta = 0;
  long param_count = 0;
  long cut_count = 0;
  std::vector<double> level_radii;  // gamma_0 .. gamma_L
  std::vector<long> level_params;   // #W_0 .. #W_L (#W_0 = 0 cuts)
  std::vector<double> level_alpha;  // #W_l / max(#W_{l-1}, 1) - 1; entry 0 is 0
  double alpha_hat = 0.0;
  int sliver_count = 0;
};

struct MultiLevelRefinement {
  RefinementTree tree;  // all levels grafted into one tree
  RefinementStats stats;
};

/// Applies refine_level repeatedly, starting from p, until the partition's
/// enclosing radius is <= target_radius (or `max_levels` is reached).
MultiLevelRefinement refine_levels(const PolytopeH& p, double target_radius, int max_levels = 32,
                                   kernels::Exec exec = kernels::Exec::parallel);

struct GrunbaumCheck {
  bool holds = false;
  double ratio = 0.0;
  double bound = 0.0;  // 1 - 1/d
  double std_error = 0.0;
};

GrunbaumCheck grunbaum_check(const PolytopeH& parent, const PolytopeH& child,
                             const VolumeRequest& req = VolumeRequest::exact_volume());

/// Upper bound on the largest inscribed radius after k anchor cuts:
/// [ (1 - 1/d)^k vol_p / (zeta^d V_d) ]^(1/d).
double eta_decay_bound(int k, int d, double vol_p, double zeta);

struct GammaParamRelation {
  double gamma_s = 0.0;
  long param_count = 0;
  double alpha_hat = 0.0;
  double exponent = 0.0;  // 1 / log2(1 + alpha_hat)
  double bound = 0.0;     // #W^-exponent
  bool holds = false;
  bool alpha_one_holds = false;  // gamma_s * #W <= 1
};

GammaParamRelation gamma_param_relation(const RefinementStats& stats);

}  // namespace adacover

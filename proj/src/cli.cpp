#include "adacover/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "adacover/bounds.hpp"
#include "adacover/covering.hpp"
#include "adacover/error.hpp"
#include "adacover/io.hpp"
#include "adacover/partition.hpp"
#include "adacover/verify.hpp"

namespace adacover::cli {

using nlohmann::json;
namespace fs = std::filesystem;

json RunReport::to_json() const {
  json j = {{"version", version}, {"config", config}, {"results", results}, {"elapsed_seconds", elapsed_seconds}};
  if (passed) j["passed"] = *passed;
  return j;
}

std::vector<std::string> emit_report(const RunReport& report, const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::io, "cannot create output directory '" + dir + "': " + ec.message());
  std::vector<std::string> written;
  const auto write = [&](const std::string& name, const std::string& text) {
    const std::string path = (fs::path(dir) / name).string();
    std::ofstream out(path, std::ios::binary);
    if (!out) fail(ErrorKind::io, "cannot write '" + path + "'");
    out << text;
    out.close();
    if (!out) fail(ErrorKind::io, "failed writing '" + path + "'");
    written.push_back(path);
  };
  write("report.json", report.to_json().dump(2) + "\n");
  for (const auto& [name, text] : report.series) write(name, text);
  return written;
}

namespace {

struct KeySpec {
  const char* key;
  const char* help;
};

// --------------------------------------------------------------------------
// Typed access to the resolved key/value configuration.

class Values {
 public:
  explicit Values(const std::map<std::string, std::string>& v) : v_(v) {}

  bool has(const std::string& key) const { return v_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback) const {
    const auto it = v_.find(key);
    return it == v_.end() ? fallback : it->second;
  }

  double num(const std::string& key, double fallback) const {
    const auto it = v_.find(key);
    if (it == v_.end()) return fallback;
    return parse_double(key, it->second);
  }

  std::uint64_t count(const std::string& key, std::uint64_t fallback) const {
    const auto it = v_.find(key);
    if (it == v_.end()) return fallback;
    const double v = parse_double(key, it->second);
    require(v >= 0.0 && v == std::floor(v) && v < 1.8e19, "'" + key + "' must be a non-negative integer");
    return static_cast<std::uint64_t>(v);
  }

  std::vector<double> list(const std::string& key, const std::vector<double>& fallback) const {
    const auto it = v_.find(key);
    if (it == v_.end()) return fallback;
    std::vector<double> out;
    std::stringstream ss(it->second);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(parse_double(key, cell));
    require(!out.empty(), "'" + key + "' must be a comma-separated list of numbers");
    return out;
  }

  /// Inline JSON (starting with '{') or a path to a JSON file.
  std::optional<json> doc(const std::string& key) const {
    const auto it = v_.find(key);
    if (it == v_.end()) return std::nullopt;
    std::string text = it->second;
    const auto first = text.find_first_not_of(" \t");
    if (first == std::string::npos || text[first] != '{') {
      const std::string path = text.substr(first == std::string::npos ? 0 : first);
      std::ifstream in(path.rfind('@', 0) == 0 ? path.substr(1) : path);
      require(static_cast<bool>(in), "'" + key + "': cannot open '" + path + "'");
      std::stringstream buf;
      buf << in.rdbuf();
      text = buf.str();
    }
    return json::parse(text);
  }

 private:
  static double parse_double(const std::string& key, const std::string& text) {
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(text, &used);
    } catch (const std::exception&) {
      fail(ErrorKind::invalid_argument, "'" + key + "' is not a number: '" + text + "'");
    }
    while (used < text.size() && std::isspace(static_cast<unsigned char>(text[used]))) ++used;
    require(used == text.size(), "'" + key + "' is not a number: '" + text + "'");
    return v;
  }

  const std::map<std::string, std::string>& v_;
};

json config_json(const RunConfig& cfg) {
  json values = json::object();
  for (const auto& [k, v] : cfg.values) values[k] = v;
  return {{"subcommand", cfg.subcommand}, {"master_seed", cfg.master_seed}, {"values", values}};
}

std::string fmt(double v) { return io::format_double(v); }

int to_int(double v, const char* key) {
  require(v == std::floor(v) && std::abs(v) < 1e9, std::string("'") + key + "' must be an integer");
  return static_cast<int>(v);
}

DensityModel density_for(const Values& v, int d, std::uint64_t seed) {
  if (auto j = v.doc("density")) {
    DensityModel density = io::density_from_json(*j, derive_seed(seed, StreamTag::normalization, 0));
    require(density.dim() == d, "density dimension does not match d");
    return density;
  }
  return DensityModel::uniform(d);
}

Eigen::VectorXd point_for(const Values& v, const std::string& key, int d) {
  const std::vector<double> coords = v.list(key, std::vector<double>(static_cast<std::size_t>(d), 0.0));
  require(static_cast<int>(coords.size()) == d, "'" + key + "' must have d coordinates");
  return Eigen::Map<const Eigen::VectorXd>(coords.data(), d);
}

// --------------------------------------------------------------------------
// cover-sim

const std::vector<KeySpec> kCoverKeys = {
    {"d", "dimension (default 2)"},
    {"gamma", "ball radius (default 0.3)"},
    {"density", "density JSON, inline or file path (default uniform-ball)"},
    {"trials", "number of first-cover trials (default 500)"},
    {"m", "comma-separated m grid (default 10,20,50,100,200)"},
    {"probe_spacing", "probe grid spacing for c estimation (default gamma/2)"},
    {"mc_samples", "Monte Carlo samples per probability-mass estimate (default 20000)"},
    {"point", "comma-separated coordinates of the per-point experiment (default origin)"},
    {"point_trials", "per-point cover-time samples (default 10000)"},
};

RunReport run_cover_sim(const RunConfig& cfg) {
  const Values v(cfg.values);
  const int d = to_int(v.num("d", 2), "d");
  const double gamma = v.num("gamma", 0.3);
  require(d >= 1, "d must be >= 1");
  require(gamma > 0.0, "gamma must be positive");
  const DensityModel density = density_for(v, d, cfg.master_seed);
  const std::uint64_t n_trials = v.count("trials", 500);
  std::vector<std::uint64_t> m_values;
  for (double m : v.list("m", {10, 20, 50, 100, 200})) {
    require(m >= 0 && m == std::floor(m), "'m' entries must be non-negative integers");
    m_values.push_back(static_cast<std::uint64_t>(m));
  }
  const double probe_spacing = v.num("probe_spacing", gamma / 2.0);
  const std::uint64_t mc_samples = v.count("mc_samples", 20000);

  const PointSet probes = ball_grid(d, std::min(2.0, probe_spacing));
  const CEstimate c = estimate_c(density, gamma, probes, mc_samples, derive_seed(cfg.master_seed, StreamTag::prob_mass, 0));
  const PointSet grid = cover_grid(d, gamma);
  const Delta1Result curve = delta1_curve(density, gamma, grid, m_values, n_trials, cfg.master_seed, c.c);

  RunReport report;
  json delta1 = json::array();
  io::CsvWriter csv({"m", "empirical_delta1", "markov_bound"});
  bool markov_ok = true;
  for (const auto& p : curve.points) {
    const bool ok = p.uncovered_fraction <= p.markov_bound + 3.0 * p.std_error;
    markov_ok = markov_ok && ok;
    delta1.push_back({{"m", p.m},
                      {"empirical_delta1", p.uncovered_fraction},
                      {"std_error", p.std_error},
                      {"markov_bound", std::isfinite(p.markov_bound) ? json(p.markov_bound) : json(nullptr)},
                      {"within_bound", ok}});
    csv.add_row({std::to_string(p.m), fmt(p.uncovered_fraction), fmt(p.markov_bound)});
  }
  double mean_point = 0.0;
  double mean_first = 0.0;
  std::uint64_t max_first = 0;
  for (const auto& t : curve.trials) {
    mean_point += t.mean_point_time;
    mean_first += static_cast<double>(t.first_cover_m);
    max_first = std::max(max_first, t.first_cover_m);
  }
  const double nt = static_cast<double>(curve.trials.size());
  mean_point /= nt;
  mean_first /= nt;
  double sd_point = 0.0;
  for (const auto& t : curve.trials) sd_point += (t.mean_point_time - mean_point) * (t.mean_point_time - mean_point);
  const double se_point = nt > 1 ? std::sqrt(sd_point / (nt - 1.0) / nt) : 0.0;

  json point_bound = nullptr;
  bool point_ok = true;
  if (c.c > 0.0) {
    const double bound = point_cover_bound(c.c, gamma, d);
    point_ok = mean_point <= bound + 3.0 * se_point;
    point_bound = {{"bound", bound}, {"mean_point_time", mean_point}, {"std_error", se_point}, {"holds", point_ok}};
  }

  const Eigen::VectorXd x = point_for(v, "point", d);
  const std::uint64_t point_trials = v.count("point_trials", 10000);
  const auto times = per_point_cover_times(density, x, gamma, point_trials,
                                           derive_seed(cfg.master_seed, StreamTag::point_cover, 0));
  double sum = 0.0;
  double sum_sq = 0.0;
  for (auto t : times) {
    sum += static_cast<double>(t);
    sum_sq += static_cast<double>(t) * static_cast<double>(t);
  }
  const double np = static_cast<double>(times.size());
  const double mean_t = np > 0 ? sum / np : 0.0;
  const double se_t = np > 1 ? std::sqrt(std::max(0.0, (sum_sq - sum * sum / np) / (np - 1.0)) / np) : 0.0;
  const MassEstimate mass = prob_mass_ball(density, x, gamma, mc_samples, derive_seed(cfg.master_seed, StreamTag::prob_mass, 1));

  report.results = {
      {"d", d},
      {"gamma", gamma},
      {"density", io::density_to_json(density)},
      {"c_hat", c.c},
      {"c_zero_mass", c.zero_mass},
      {"probe_count", probes.size()},
      {"grid_points", grid.size()},
      {"grid_spacing", gamma / 10.0},
      {"trials", n_trials},
      {"mean_point_time", mean_point},
      {"mean_first_cover_m", mean_first},
      {"max_first_cover_m", max_first},
      {"point_bound", point_bound},
      {"delta1", delta1},
      {"markov_holds", markov_ok},
      {"point_cover",
       {{"point", std::vector<double>(x.data(), x.data() + x.size())},
        {"mass", mass.value},
        {"expected_time", mass.value > 0 ? json(1.0 / mass.value) : json(nullptr)},
        {"mean_time", mean_t},
        {"std_error", se_t},
        {"samples", point_trials}}},
  };
  report.series["delta1.csv"] = csv.str();
  report.passed = markov_ok && point_ok;
  return report;
}

// --------------------------------------------------------------------------
// refine

const std::vector<KeySpec> kRefineKeys = {
    {"polytope", "polytope JSON {\"a\": [...], \"b\": [...]}, inline or file path (default cube [-1,1]^d)"},
    {"d", "dimension of the default cube (default 2)"},
    {"target", "target enclosing radius (default root radius / 8)"},
    {"max_levels", "maximum number of halving levels (default 32)"},
};

RunReport run_refine(const RunConfig& cfg) {
  const Values v(cfg.values);
  PolytopeH p;
  if (auto j = v.doc("polytope")) {
    p = io::polytope_from_json(*j);
  } else {
    const int d = to_int(v.num("d", 2), "d");
    require(d >= 1, "d must be >= 1");
    p = PolytopeH::cube(d);
  }
  const double root_radius = make_node(p, 0).enclosing_radius;
  const double target = v.num("target", root_radius / 8.0);
  const int max_levels = to_int(v.num("max_levels", 32), "max_levels");
  const MultiLevelRefinement ref = refine_levels(p, target, max_levels);
  const RefinementStats& s = ref.stats;

  io::CsvWriter csv({"level", "gamma", "param_count", "alpha_hat"});
  json levels = json::array();
  bool halving_ok = true;
  for (std::size_t l = 0; l < s.level_radii.size(); ++l) {
    const bool ok = s.level_radii[l] <= s.level_radii[0] * std::pow(0.5, static_cast<double>(l)) * (1.0 + 1e-12);
    halving_ok = halving_ok && ok;
    levels.push_back({{"level", l}, {"gamma", s.level_radii[l]}, {"param_count", s.level_params[l]}, {"alpha", s.level_alpha[l]}});
    csv.add_row({std::to_string(l), fmt(s.level_radii[l]), std::to_string(s.level_params[l]), fmt(s.level_alpha[l])});
  }
  const double max_leaf = ref.tree.max_leaf_radius();
  const bool within = max_leaf <= target * (1.0 + 1e-12);
  const int internal = ref.tree.internal_count();
  const bool params_ok = s.param_count == static_cast<long>(p.dim() + 1) * internal;

  RunReport report;
  report.results = {
      {"d", p.dim()},
      {"root_radius", root_radius},
      {"target", target},
      {"levels", levels},
      {"alpha_hat", s.alpha_hat},
      {"beta", s.beta},
      {"cut_count", s.cut_count},
      {"param_count", s.param_count},
      {"internal_nodes", internal},
      {"leaves", ref.tree.leaves().size()},
      {"max_leaf_radius", max_leaf},
      {"sliver_count", s.sliver_count},
      {"leaves_within_target", within},
      {"halving_holds", halving_ok},
      {"param_accounting_holds", params_ok},
  };
  bool relation_ok = true;
  if (s.level_radii.size() >= 2) {
    const GammaParamRelation rel = gamma_param_relation(s);
    relation_ok = rel.holds;
    report.results["relation"] = {{"gamma_s", rel.gamma_s},       {"param_count", rel.param_count},
                                  {"alpha_hat", rel.alpha_hat},   {"exponent", rel.exponent},
                                  {"bound", rel.bound},           {"holds", rel.holds},
                                  {"alpha_one_holds", rel.alpha_one_holds}};
  } else {
    report.results["relation"] = nullptr;
  }
  report.series["levels.csv"] = csv.str();
  report.series["tree.json"] = io::tree_to_json(ref.tree).dump() + "\n";
  report.passed = within && halving_ok && params_ok && relation_ok;
  return report;
}

// --------------------------------------------------------------------------
// bounds

const std::vector<KeySpec> kBoundsKeys = {
    {"input", "bounds inputs JSON, inline or file path"},
    {"problem", "regression | classification (default regression)"},
    {"k_f", "target Lipschitz constant"},
    {"k_m", "hypothesis Lipschitz constant"},
    {"boundary_length", "classification boundary measure"},
    {"gamma", "covering radius gamma_s"},
    {"empirical_loss", "mean training loss"},
    {"d", "dimension"},
    {"c", "uniform probability lower-bound constant"},
    {"w", "parameter count"},
    {"alpha", "architecture growth constant"},
    {"m", "training-set size"},
    {"delta", "confidence level"},
};

json report_json(const bounds::BoundReport& r) {
  const auto opt = [](const std::optional<double>& x) { return x ? json(*x) : json(nullptr); };
  return {{"epsilon", r.epsilon},
          {"delta", opt(r.delta)},
          {"m0", opt(r.m0)},
          {"empirical_term", r.empirical_term},
          {"geometric_term", r.geometric_term},
          {"radius_form_bound", r.radius_form_bound},
          {"params_bound", opt(r.params_bound)},
          {"delta_floor", bounds::delta_floor(r.epsilon)},
          {"gamma_in_range", r.gamma_in_range},
          {"delta_in_range", r.delta_in_range},
          {"m_sufficient", r.m_sufficient}};
}

RunReport run_bounds(const RunConfig& cfg) {
  const Values v(cfg.values);
  json in = json::object();
  if (auto j = v.doc("input")) {
    require(j->is_object(), "bounds input must be a JSON object");
    in = *j;
  }
  for (const auto& [key, text] : cfg.values) {
    if (key == "input") continue;
    if (key == "problem") {
      in["problem"] = text;
    } else {
      in[key] = v.num(key, 0.0);
    }
  }
  const auto num = [&](const char* key, double fallback) {
    if (!in.contains(key) || in[key].is_null()) return fallback;
    require(in[key].is_number(), std::string("'") + key + "' must be a number");
    return in[key].get<double>();
  };
  const auto maybe = [&](const char* key) -> std::optional<double> {
    if (!in.contains(key) || in[key].is_null()) return std::nullopt;
    return num(key, 0.0);
  };
  const std::string problem = in.value("problem", std::string("regression"));
  RunReport report;
  if (problem == "regression") {
    bounds::RegressionBoundInputs r;
    r.k_f = num("k_f", 0.0);
    r.k_m = num("k_m", r.k_f);
    r.gamma_s = num("gamma", num("gamma_s", 0.0));
    r.empirical_loss = num("empirical_loss", 0.0);
    r.d = to_int(num("d", 1), "d");
    r.c = num("c", 1.0);
    r.w = num("w", 1.0);
    r.alpha = num("alpha", 1.0);
    report.results = report_json(bounds::regression_report(r, maybe("m"), maybe("delta")));
  } else if (problem == "classification") {
    bounds::ClassificationBoundInputs r;
    r.boundary_length = num("boundary_length", 0.0);
    r.gamma_s = num("gamma", num("gamma_s", 0.0));
    r.empirical_loss = num("empirical_loss", 0.0);
    r.d = to_int(num("d", 2), "d");
    r.c = num("c", 1.0);
    r.w = num("w", 1.0);
    r.alpha = num("alpha", 1.0);
    report.results = report_json(bounds::classification_report(r, maybe("m"), maybe("delta")));
  } else {
    fail(ErrorKind::invalid_argument, "unknown problem '" + problem + "'");
  }
  report.results["problem"] = problem;
  report.results["inputs"] = in;
  return report;
}

// --------------------------------------------------------------------------
// verify-regression / verify-classification

const std::vector<KeySpec> kVerifyKeys = {
    {"d", "dimension (default 1 for regression, 2 for classification)"},
    {"target", "target JSON, inline or file path"},
    {"density", "density JSON, inline or file path (default uniform-ball)"},
    {"gamma", "covering radius gamma_s (default 0.3 regression, 0.1 classification)"},
    {"epsilon", "accuracy level (default derived from gamma)"},
    {"delta", "confidence level (default midway between exp(-eps^2/2) and 1)"},
    {"m", "training-set size (default 2 * ceil(m0))"},
    {"trials", "number of trials (default 300)"},
    {"n_test", "Monte Carlo test draws per trial (default 100000)"},
    {"c", "uniform lower-bound constant (default estimated)"},
    {"learner", "mcshane | nearest_neighbor | oracle"},
    {"k_m", "McShane Lipschitz constant (default K_f)"},
    {"probe_spacing", "probe grid spacing for c estimation (default gamma/2)"},
    {"mc_samples", "Monte Carlo samples per probability-mass estimate (default 20000)"},
};

Learner learner_from(const std::string& name) {
  if (name == "mcshane") return Learner::mcshane;
  if (name == "nearest_neighbor" || name == "nn") return Learner::nearest_neighbor;
  if (name == "oracle") return Learner::oracle;
  fail(ErrorKind::invalid_argument, "unknown learner '" + name + "'");
}

RunReport run_verify(const RunConfig& cfg, bool regression) {
  const Values v(cfg.values);
  TargetSpec spec;
  if (auto j = v.doc("target")) {
    spec = io::target_from_json(*j);
    if (!j->contains("d") && v.has("d")) spec.d = to_int(v.num("d", 1), "d");
  } else if (regression) {
    spec.kind = TargetKind::linear_regression;
    spec.d = to_int(v.num("d", 1), "d");
    spec.weights = Eigen::VectorXd::Zero(spec.d);
    spec.weights(0) = 0.4;
  } else {
    spec.kind = TargetKind::halfspace_classifier;
    spec.d = to_int(v.num("d", 2), "d");
    spec.weights = Eigen::VectorXd::Zero(spec.d);
    spec.weights(0) = 1.0;
  }
  const TargetFunction target = make_target(spec);
  const bool is_reg = std::holds_alternative<RegressionTarget>(target);
  require(is_reg == regression, regression ? "verify-regression needs a regression target"
                                           : "verify-classification needs a classification target");
  const int d = spec.d;
  const DensityModel density = density_for(v, d, cfg.master_seed);

  TrialConfig tc{.target = spec, .density = density};
  tc.learner = learner_from(v.str("learner", regression ? "mcshane" : "nearest_neighbor"));
  tc.master_seed = cfg.master_seed;
  tc.n_trials = v.count("trials", 300);
  tc.n_test = v.count("n_test", 100000);

  double k_f = 0.0;
  double boundary = 0.0;
  double gamma = 0.0;
  double eps = 0.0;
  if (regression) {
    k_f = std::get<RegressionTarget>(target).lipschitz_constant();
    tc.k_m = v.num("k_m", k_f);
    const double k_sum = k_f + tc.k_m;
    if (v.has("gamma") || !v.has("epsilon")) {
      gamma = v.num("gamma", 0.3);
      eps = v.has("epsilon") ? v.num("epsilon", 0.0) : bounds::epsilon_regression(k_f, tc.k_m, gamma).value;
    } else {
      eps = v.num("epsilon", 0.0);
      require(k_sum > 0.0, "cannot derive gamma from epsilon with zero Lipschitz constants");
      gamma = eps / (2.0 * k_sum);
    }
  } else {
    require(d >= 2, "classification runs need d >= 2");
    boundary = std::get<ClassificationTarget>(target).boundary_length();
    if (v.has("gamma") || !v.has("epsilon")) {
      gamma = v.num("gamma", 0.1);
      eps = v.has("epsilon") ? v.num("epsilon", 0.0) : bounds::epsilon_classification(d, gamma, boundary).value;
    } else {
      eps = v.num("epsilon", 0.0);
      require(boundary > 0.0, "cannot derive gamma from epsilon with an empty boundary");
      gamma = std::pow(eps / (2.0 * unit_ball_volume(d - 1) * boundary), 1.0 / (d - 1));
    }
  }
  require(gamma > 0.0, "gamma must be positive");
  require(eps > 0.0 && eps < 1.0, "epsilon must lie in (0, 1); got " + fmt(eps));

  double c_hat = 0.0;
  if (v.has("c")) {
    c_hat = v.num("c", 0.0);
  } else {
    const PointSet probes = ball_grid(d, std::min(2.0, v.num("probe_spacing", gamma / 2.0)));
    c_hat = estimate_c(density, gamma, probes, v.count("mc_samples", 20000),
                       derive_seed(cfg.master_seed, StreamTag::prob_mass, 0))
                .c;
  }
  require(c_hat > 0.0, "uniform lower-bound constant is zero; the density violates the assumption");
  const double floor = bounds::delta_floor(eps);
  const double delta = v.num("delta", 0.5 * (1.0 + floor));
  const double m0 = regression ? bounds::m0_general(c_hat, gamma, d, eps, delta)
                               : bounds::m0_classification(boundary, d, c_hat, eps, delta);
  tc.m = v.has("m") ? v.count("m", 1) : static_cast<std::uint64_t>(2.0 * std::ceil(m0));
  tc.epsilon = eps;
  tc.delta = delta;
  tc.gamma_s = gamma;

  const TrialsResult res = run_trials(tc);

  io::CsvWriter csv({"trial", "seed", "m", "empirical_loss", "gen_error", "gen_std_error", "gamma_realized",
                     "densely_covered", "counted", "violated"});
  double mean_gen = 0.0;
  double mean_gamma = 0.0;
  for (std::size_t t = 0; t < res.outcomes.size(); ++t) {
    const auto& o = res.outcomes[t];
    mean_gen += o.gen_error;
    mean_gamma += o.gamma_realized;
    csv.add_row({std::to_string(t), std::to_string(o.seed), std::to_string(o.m), fmt(o.empirical_loss), fmt(o.gen_error),
                 fmt(o.gen_std_error), fmt(o.gamma_realized), o.densely_covered ? "1" : "0", o.counted ? "1" : "0",
                 o.violated ? "1" : "0"});
  }
  const double nt = static_cast<double>(res.outcomes.size());

  RunReport report;
  report.results = {
      {"target", io::target_to_json(spec)},
      {"density", io::density_to_json(density)},
      {"learner", v.str("learner", regression ? "mcshane" : "nearest_neighbor")},
      {"gamma_s", gamma},
      {"epsilon", eps},
      {"delta", delta},
      {"delta_floor", floor},
      {"c_hat", c_hat},
      {"m0", m0},
      {"m", tc.m},
      {"trials", tc.n_trials},
      {"counted", res.counted},
      {"violations", res.violations},
      {"violation_rate", res.violation_rate},
      {"std_error", res.std_error},
      {"threshold", delta + 3.0 * res.std_error},
      {"covering_failures", res.covering_failures},
      {"violations_when_covered", res.violations_when_covered},
      {"mean_gen_error", mean_gen / nt},
      {"mean_gamma_realized", mean_gamma / nt},
  };
  if (regression) {
    report.results["k_f"] = k_f;
    report.results["k_m"] = tc.k_m;
  } else {
    report.results["boundary_length"] = boundary;
  }
  report.series["trials.csv"] = csv.str();
  report.passed = res.counted > 0 && res.passes(delta);
  return report;
}

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_argument:
    case ErrorKind::unsupported_dimension:
    case ErrorKind::infeasible_confidence:
    case ErrorKind::infeasible_lipschitz:
      return kInvalidConfig;
    default: return kRuntimeError;
  }
}

struct SubSpec {
  std::string name;
  std::string description;
  const std::vector<KeySpec>* keys;
  RunReport (*run)(const RunConfig&);
};

RunReport run_verify_regression(const RunConfig& c) { return run_verify(c, true); }
RunReport run_verify_classification(const RunConfig& c) { return run_verify(c, false); }

const std::vector<SubSpec>& subcommands() {
  static const std::vector<SubSpec> subs = {
      {"cover-sim", "simulate random ball coverings of the unit ball", &kCoverKeys, run_cover_sim},
      {"refine", "refine a polytope level by level until a target enclosing radius", &kRefineKeys, run_refine},
      {"bounds", "evaluate generalization bounds and sample complexity", &kBoundsKeys, run_bounds},
      {"verify-regression", "measure bound violations for a Lipschitz regression target", &kVerifyKeys,
       run_verify_regression},
      {"verify-classification", "measure bound violations for a classification target", &kVerifyKeys,
       run_verify_classification},
  };
  return subs;
}

}  // namespace

RunReport execute(const RunConfig& cfg) {
  const auto& subs = subcommands();
  const auto it = std::find_if(subs.begin(), subs.end(), [&](const SubSpec& s) { return s.name == cfg.subcommand; });
  require(it != subs.end(), "unknown subcommand '" + cfg.subcommand + "'");
  for (const auto& [k, val] : cfg.values) {
    const bool known = std::any_of(it->keys->begin(), it->keys->end(), [&k](const KeySpec& s) { return k == s.key; });
    require(known, "unknown key '" + k + "' for " + it->name);
  }
  const auto start = std::chrono::steady_clock::now();
  RunReport report = it->run(cfg);
  report.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.config = config_json(cfg);
  return report;
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"Adaptive covering toolkit: covering simulation, polytope refinement, bound evaluation"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  struct Sub {
    const SubSpec* spec;
    CLI::App* app = nullptr;
    std::map<std::string, std::string> flags;
  };
  std::vector<Sub> subs;
  for (const auto& spec : subcommands()) subs.push_back({&spec, nullptr, {}});

  std::string config_path;
  std::string out_dir;
  std::uint64_t seed = 0;
  for (auto& s : subs) {
    s.app = app.add_subcommand(s.spec->name, s.spec->description);
    s.app->add_option("--config", config_path, "key = value configuration file (flags override it)");
    s.app->add_option("--out", out_dir, std::string("output directory (default $") + kOutDirEnv + " or .)");
    s.app->add_option("--seed", seed, "master seed (default 0)");
    for (const auto& k : *s.spec->keys) {
      s.app->add_option_function<std::string>(
          "--" + std::string(k.key), [&flags = s.flags, key = std::string(k.key)](const std::string& val) { flags[key] = val; },
          k.help);
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  const auto it = std::find_if(subs.begin(), subs.end(), [](const Sub& s) { return s.app->parsed(); });
  if (it == subs.end()) {
    std::cerr << app.help();
    return kInvalidConfig;
  }

  RunConfig cfg;
  cfg.subcommand = it->spec->name;
  RunReport report;
  bool have_report = false;
  try {
    if (!config_path.empty()) cfg.values = io::read_key_value_file(config_path);
    if (cfg.values.count("seed") && it->app->count("--seed") == 0) {
      seed = Values(cfg.values).count("seed", 0);
    }
    cfg.values.erase("seed");
    if (cfg.values.count("out") && out_dir.empty()) out_dir = cfg.values["out"];
    cfg.values.erase("out");
    for (const auto& [k, val] : it->flags) cfg.values[k] = val;
    cfg.master_seed = seed;
    if (out_dir.empty()) {
      const char* env = std::getenv(kOutDirEnv);
      out_dir = env && *env ? env : ".";
    }
    cfg.out_dir = out_dir;

    report = execute(cfg);
    have_report = true;
    emit_report(report, cfg.out_dir);
  } catch (const Error& e) {
    std::cerr << "adacover " << cfg.subcommand << ": " << e.what() << "\n";
    return exit_code_for(e.kind());
  } catch (const json::exception& e) {
    std::cerr << "adacover " << cfg.subcommand << ": invalid JSON: " << e.what() << "\n";
    return have_report ? kRuntimeError : kInvalidConfig;
  } catch (const std::exception& e) {
    std::cerr << "adacover " << cfg.subcommand << ": " << e.what() << "\n";
    return kRuntimeError;
  }

  std::cout << report.to_json().dump(2) << "\n";
  if (report.passed && !*report.passed) return kVerdictFailure;
  return kSuccess;
}

int dispatch(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return dispatch(args);
}

}  // namespace adacover::cli

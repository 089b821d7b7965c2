#include "adacover/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "adacover/error.hpp"

namespace adacover::io {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& text, const std::string& context) {
  const std::string t = trim(text);
  double v = 0.0;
  const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || res.ec != std::errc() || res.ptr != t.data() + t.size()) {
    fail(ErrorKind::invalid_argument, context + ": cannot parse number '" + t + "'");
  }
  return v;
}

Eigen::VectorXd vector_from_json(const json& j, const std::string& what) {
  require(j.is_array(), what + " must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    require(j[i].is_number(), what + " must contain numbers");
    v(static_cast<Eigen::Index>(i)) = j[i].get<double>();
  }
  return v;
}

Eigen::MatrixXd matrix_from_json(const json& j, const std::string& what) {
  require(j.is_array() && !j.empty(), what + " must be a non-empty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  require(cols > 0, what + " rows must be non-empty arrays");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    require(j[r].is_array() && j[r].size() == cols, what + " rows must all have the same length");
    m.row(static_cast<Eigen::Index>(r)) = vector_from_json(j[r], what).transpose();
  }
  return m;
}

json vector_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json out = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_to_json(m.row(r).transpose()));
  return out;
}

int int_field(const json& j, const char* key, int fallback) {
  if (!j.contains(key)) return fallback;
  require(j[key].is_number_integer(), std::string("'") + key + "' must be an integer");
  return j[key].get<int>();
}

double number_field(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  require(j[key].is_number(), std::string("'") + key + "' must be a number");
  return j[key].get<double>();
}

}  // namespace

PointSet read_points_csv(std::istream& in) {
  std::vector<double> data;
  Eigen::Index d = -1;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::stringstream ss(t);
    std::string cell;
    Eigen::Index cols = 0;
    while (std::getline(ss, cell, ',')) {
      data.push_back(parse_number(cell, "csv line " + std::to_string(line_no)));
      ++cols;
    }
    if (d < 0) d = cols;
    require(cols == d, "csv line " + std::to_string(line_no) + ": expected " + std::to_string(d) + " columns");
  }
  if (d <= 0) return PointSet();
  const auto n = static_cast<Eigen::Index>(data.size()) / d;
  return PointSet(Eigen::Map<Eigen::MatrixXd>(data.data(), d, n));
}

PointSet read_points_csv_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open '" + path + "'");
  return read_points_csv(in);
}

void write_points_csv(std::ostream& out, const PointSet& pts) {
  for (Eigen::Index i = 0; i < pts.size(); ++i) {
    for (Eigen::Index k = 0; k < pts.dim(); ++k) {
      if (k > 0) out << ',';
      out << format_double(pts.coords(k, i));
    }
    out << '\n';
  }
}

PolytopeH polytope_from_json(const json& j) {
  require(j.is_object() && j.contains("a") && j.contains("b"), "polytope must be an object with 'a' and 'b'");
  Eigen::MatrixXd a = matrix_from_json(j["a"], "polytope 'a'");
  Eigen::VectorXd b = vector_from_json(j["b"], "polytope 'b'");
  require(a.rows() == b.size(), "polytope 'a' and 'b' must have the same number of rows");
  return PolytopeH(std::move(a), std::move(b));
}

json polytope_to_json(const PolytopeH& p) { return {{"a", matrix_to_json(p.a)}, {"b", vector_to_json(p.b)}}; }

DensityModel density_from_json(const json& j, std::uint64_t seed) {
  require(j.is_object() && j.contains("kind") && j["kind"].is_string(), "density must be an object with a 'kind'");
  const std::string kind = j["kind"].get<std::string>();
  if (kind == "uniform-ball" || kind == "uniform") {
    return DensityModel::uniform(int_field(j, "d", 1));
  }
  if (kind == "piecewise-constant-grid" || kind == "piecewise") {
    require(j.contains("weights"), "piecewise density needs 'weights'");
    const Eigen::VectorXd w = vector_from_json(j["weights"], "density 'weights'");
    return DensityModel::piecewise_grid(int_field(j, "d", 1), int_field(j, "cells", 1),
                                        std::vector<double>(w.data(), w.data() + w.size()), seed);
  }
  if (kind == "truncated-gaussian" || kind == "gaussian") {
    require(j.contains("mean") && j.contains("cov"), "gaussian density needs 'mean' and 'cov'");
    return DensityModel::truncated_gaussian(vector_from_json(j["mean"], "density 'mean'"),
                                            matrix_from_json(j["cov"], "density 'cov'"), seed);
  }
  fail(ErrorKind::invalid_argument, "unknown density kind '" + kind + "'");
}

json density_to_json(const DensityModel& density) {
  json j = {{"kind", to_string(density.kind())}, {"d", density.dim()}};
  if (density.kind() == DensityKind::piecewise_constant_grid) {
    j["cells"] = density.cells_per_axis();
    j["weights"] = density.weights();
  } else if (density.kind() == DensityKind::truncated_gaussian) {
    j["mean"] = vector_to_json(density.mean());
    j["cov"] = matrix_to_json(density.covariance());
  }
  return j;
}

json tree_to_json(const RefinementTree& tree) {
  json nodes = json::array();
  for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
    const auto& n = tree.nodes[i];
    json node = {{"id", i},
                 {"depth", n.depth},
                 {"parent", n.parent},
                 {"polytope", polytope_to_json(n.polytope)},
                 {"anchor", vector_to_json(n.anchor)},
                 {"enclosing_radius", n.enclosing_radius},
                 {"inscribed_radius", n.inscribed_radius},
                 {"diameter", n.diameter},
                 {"zeta", n.zeta},
                 {"sliver", n.sliver}};
    node["cut"] = n.cut ? json{{"normal", vector_to_json(n.cut->normal)}, {"offset", n.cut->offset}} : json(nullptr);
    node["children"] = n.children ? json{(*n.children)[0], (*n.children)[1]} : json(nullptr);
    nodes.push_back(std::move(node));
  }
  return {{"zeta_min", tree.zeta_min}, {"nodes", std::move(nodes)}};
}

TargetSpec target_from_json(const json& j) {
  require(j.is_object() && j.contains("kind") && j["kind"].is_string(), "target must be an object with a 'kind'");
  TargetSpec spec;
  spec.kind = target_kind_from_string(j["kind"].get<std::string>());
  spec.d = int_field(j, "d", 1);
  if (j.contains("weights")) spec.weights = vector_from_json(j["weights"], "target 'weights'");
  if (j.contains("center")) spec.center = vector_from_json(j["center"], "target 'center'");
  spec.offset = number_field(j, "offset", spec.offset);
  spec.scale = number_field(j, "scale", spec.scale);
  spec.radius = number_field(j, "radius", spec.radius);
  return spec;
}

json target_to_json(const TargetSpec& spec) {
  json j = {{"kind", to_string(spec.kind)}, {"d", spec.d}};
  switch (spec.kind) {
    case TargetKind::linear_regression:
      j["weights"] = vector_to_json(spec.weights);
      j["offset"] = spec.offset;
      break;
    case TargetKind::radial_regression:
      j["center"] = vector_to_json(spec.center);
      j["scale"] = spec.scale;
      break;
    case TargetKind::halfspace_classifier:
      j["weights"] = vector_to_json(spec.weights);
      j["offset"] = spec.offset;
      break;
    case TargetKind::disk_classifier:
      j["center"] = vector_to_json(spec.center);
      j["radius"] = spec.radius;
      break;
  }
  return j;
}

std::map<std::string, std::string> parse_key_values(std::istream& in) {
  std::map<std::string, std::string> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string t = trim(hash == std::string::npos ? line : line.substr(0, hash));
    if (t.empty()) continue;
    const auto eq = t.find('=');
    require(eq != std::string::npos, "config line " + std::to_string(line_no) + ": expected key = value");
    const std::string key = trim(t.substr(0, eq));
    require(!key.empty(), "config line " + std::to_string(line_no) + ": empty key");
    out[key] = trim(t.substr(eq + 1));
  }
  return out;
}

std::map<std::string, std::string> read_key_value_file(const std::string& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), "cannot open config file '" + path + "'");
  return parse_key_values(in);
}

void CsvWriter::add_row(const std::vector<std::string>& cells) {
  require(cells.size() == header_.size(), "csv row width does not match the header");
  rows_.push_back(cells);
}

std::string CsvWriter::str() const {
  std::string out;
  const auto append = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i > 0) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  append(header_);
  for (const auto& r : rows_) append(r);
  return out;
}

}  // namespace adacover::io

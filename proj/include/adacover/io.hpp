#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "json.hpp"

#include "adacover/covering.hpp"
#include "adacover/geometry.hpp"
#include "adacover/partition.hpp"
#include "adacover/verify.hpp"

namespace adacover::io {

using nlohmann::json;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

/// One point per row, d numeric columns; blank lines and '#' comments skipped.
PointSet read_points_csv(std::istream& in);
PointSet read_points_csv_file(const std::string& path);
void write_points_csv(std::ostream& out, const PointSet& pts);

/// {"a": [[...], ...], "b": [...]}
PolytopeH polytope_from_json(const json& j);
json polytope_to_json(const PolytopeH& p);

/// {"kind": "uniform-ball", "d": 2}
/// {"kind": "piecewise-constant-grid", "d": 2, "cells": 4, "weights": [...]}
/// {"kind": "truncated-gaussian", "mean": [...], "cov": [[...], ...]}
DensityModel density_from_json(const json& j, std::uint64_t seed = 0);
json density_to_json(const DensityModel& density);

json tree_to_json(const RefinementTree& tree);

/// {"kind": "linear-regression", "d": 1, "weights": [0.4], "offset": 0} etc.
TargetSpec target_from_json(const json& j);
json target_to_json(const TargetSpec& spec);

/// Reads `key = value` lines; '#' starts a comment.
std::map<std::string, std::string> parse_key_values(std::istream& in);
std::map<std::string, std::string> read_key_value_file(const std::string& path);

/// Plain CSV table writer with round-trip number formatting.
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) : header_(std::move(header)) {}
  void add_row(const std::vector<std::string>& cells);
  std::string str() const;
  std::size_t rows() const { return rows_.size(); }

 private:
  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace adacover::io

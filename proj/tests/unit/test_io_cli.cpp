#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>

#include "adacover/cli.hpp"
#include "adacover/io.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace adacover;
using testutil::vec;
namespace fs = std::filesystem;

namespace {

// Silences the report printed on stdout while a dispatch call runs.
struct QuietStdout {
  std::ostringstream sink;
  std::streambuf* old;
  QuietStdout() : old(std::cout.rdbuf(sink.rdbuf())) {}
  ~QuietStdout() { std::cout.rdbuf(old); }
};

struct QuietStderr {
  std::ostringstream sink;
  std::streambuf* old;
  QuietStderr() : old(std::cerr.rdbuf(sink.rdbuf())) {}
  ~QuietStderr() { std::cerr.rdbuf(old); }
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("adacover_unit_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

int run(const std::vector<std::string>& args) {
  QuietStdout out;
  QuietStderr err;
  return cli::dispatch(args);
}

io::json read_json(const fs::path& p) {
  std::ifstream in(p);
  return io::json::parse(in);
}

std::string read_text(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("io_cli") {

TEST_CASE("number formatting round-trips") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double v = u(rng) * std::pow(10.0, (i % 40) - 20);
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.1) == "0.1");
  CHECK(io::format_double(2.0) == "2");
  CHECK(io::format_double(std::numeric_limits<double>::infinity()) == "inf");
}

TEST_CASE("point CSV round-trips at full precision") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> g;
  PointSet pts(3, 50);
  for (Eigen::Index i = 0; i < pts.size(); ++i) pts[i] = vec({g(rng), g(rng) * 1e-7, g(rng) * 1e9});
  std::stringstream ss;
  io::write_points_csv(ss, pts);
  std::stringstream in("# comment\n\n" + ss.str());
  const auto back = io::read_points_csv(in);
  REQUIRE(back.size() == pts.size());
  CHECK(back.coords == pts.coords);

  std::stringstream ragged("1,2\n3\n");
  CHECK_ERROR_KIND(io::read_points_csv(ragged), ErrorKind::invalid_argument);
}

TEST_CASE("json conversions round-trip") {
  const auto tri = testutil::triangle();
  const auto p = io::polytope_from_json(io::polytope_to_json(tri));
  CHECK(p.a == tri.a);
  CHECK(p.b == tri.b);

  const auto dens = io::density_from_json(
      io::json::parse(R"({"kind": "piecewise-constant-grid", "d": 2, "cells": 2, "weights": [1, 2, 3, 4]})"));
  CHECK(dens.kind() == DensityKind::piecewise_constant_grid);
  const auto again = io::density_from_json(io::density_to_json(dens));
  CHECK(again.weights() == dens.weights());
  CHECK(again.pdf(vec({0.3, 0.2})) == dens.pdf(vec({0.3, 0.2})));
  CHECK(io::density_from_json(io::json::parse(R"({"kind": "uniform-ball", "d": 3})")).dim() == 3);
  const auto gauss = io::density_from_json(io::json::parse(R"({"kind": "truncated-gaussian", "mean": [0, 0.1], "cov": [[0.5, 0], [0, 0.5]]})"));
  CHECK(gauss.kind() == DensityKind::truncated_gaussian);
  CHECK_ERROR_KIND(io::density_from_json(io::json::parse(R"({"kind": "beta"})")), ErrorKind::invalid_argument);

  TargetSpec t;
  t.kind = TargetKind::disk_classifier;
  t.d = 2;
  t.center = vec({0.1, -0.2});
  t.radius = 0.4;
  const auto t2 = io::target_from_json(io::target_to_json(t));
  CHECK(t2.kind == t.kind);
  CHECK(t2.center == t.center);
  CHECK(t2.radius == t.radius);

  const auto tree = refine_until(PolytopeH::cube(2), 0.8);
  const auto j = io::tree_to_json(tree);
  REQUIRE(j["nodes"].size() == tree.nodes.size());
  CHECK(j["nodes"][0]["children"].size() == 2);
  CHECK(j["nodes"][1]["parent"] == 0);
  CHECK(j["nodes"].back()["cut"].is_null());
  CHECK(j["nodes"].back()["children"].is_null());
}

TEST_CASE("key-value parsing") {
  std::stringstream in("# header\nd = 2\n gamma=0.25  # trailing\n\nm = 10,20\n");
  const auto kv = io::parse_key_values(in);
  CHECK(kv.at("d") == "2");
  CHECK(kv.at("gamma") == "0.25");
  CHECK(kv.at("m") == "10,20");
  std::stringstream bad("no equals sign here\n");
  CHECK_ERROR_KIND(io::parse_key_values(bad), ErrorKind::invalid_argument);

  io::CsvWriter csv({"a", "b"});
  csv.add_row({"1", "2"});
  CHECK(csv.str() == "a,b\n1,2\n");
  CHECK_ERROR_KIND(csv.add_row({"1"}), ErrorKind::invalid_argument);
}

TEST_CASE("bounds run writes a report and nothing else") {
  const auto dir = scratch("bounds");
  {
    std::ofstream f(dir / "b.json");
    f << R"({"problem": "regression", "k_f": 0.4, "gamma": 0.3, "c": 0.5, "delta": 0.9})";
  }
  const auto out = dir / "out";
  CHECK(run({"bounds", "--input", (dir / "b.json").string(), "--out", out.string()}) == cli::kSuccess);
  const auto rep = read_json(out / "report.json");
  CHECK(rep["results"]["epsilon"].get<double>() == doctest::Approx(0.48));
  CHECK(rep["config"]["subcommand"] == "bounds");
  CHECK(rep.contains("elapsed_seconds"));
  CHECK(rep.contains("version"));
  int files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(out)) ++files;
  CHECK(files == 1);

  // flags override the input document
  CHECK(run({"bounds", "--input", (dir / "b.json").string(), "--gamma", "0.1", "--out", out.string()}) == cli::kSuccess);
  CHECK(read_json(out / "report.json")["results"]["epsilon"].get<double>() == doctest::Approx(0.16));
}

TEST_CASE("exit codes") {
  const auto dir = scratch("codes");
  {
    std::ofstream f(dir / "bad.json");
    f << R"({"k_f": 0.4, )";
  }
  CHECK(run({"bounds", "--input", (dir / "bad.json").string(), "--out", dir.string()}) == cli::kInvalidConfig);
  CHECK(run({"teleport"}) == cli::kInvalidConfig);
  CHECK(run({}) == cli::kInvalidConfig);
  CHECK(run({"bounds", "--k_f", "abc", "--out", dir.string()}) == cli::kInvalidConfig);
  {
    std::ofstream f(dir / "cfg.txt");
    f << "k_f = 1\nwarp = 9\n";
  }
  CHECK(run({"bounds", "--config", (dir / "cfg.txt").string(), "--out", dir.string()}) == cli::kInvalidConfig);
  // delta at or below its floor
  CHECK(run({"verify-regression", "--delta", "0.5", "--out", dir.string()}) == cli::kInvalidConfig);
  CHECK(run({"bounds", "--k_f", "1", "--out", "/proc/adacover/forbidden"}) == cli::kRuntimeError);
}

TEST_CASE("a failing verdict still writes its report") {
  const auto dir = scratch("verdict");
  // a hypothesis far steeper than the target violates the bound almost always
  const int code = run({"verify-regression", "--target", R"({"kind": "linear-regression", "d": 1, "weights": [0.95]})",
                        "--k_m", "10", "--gamma", "0.041", "--m", "1", "--trials", "30", "--n_test", "2000", "--c",
                        "0.5", "--out", dir.string()});
  CHECK(code == cli::kVerdictFailure);
  const auto rep = read_json(dir / "report.json");
  CHECK(rep["passed"] == false);
  CHECK(rep["results"]["violation_rate"].get<double>() > rep["results"]["delta"].get<double>());
  const auto csv = read_text(dir / "trials.csv");
  CHECK(csv.rfind("trial,seed,m,empirical_loss,gen_error,gen_std_error,gamma_realized,densely_covered,counted,violated\n", 0) == 0);
}

TEST_CASE("series files carry their fixed headers") {
  const auto dir = scratch("series");
  CHECK(run({"cover-sim", "--d", "1", "--gamma", "0.3", "--trials", "40", "--point_trials", "200", "--mc_samples",
             "2000", "--out", dir.string()}) == cli::kSuccess);
  CHECK(read_text(dir / "delta1.csv").rfind("m,empirical_delta1,markov_bound\n", 0) == 0);
  CHECK(run({"refine", "--d", "2", "--out", dir.string()}) == cli::kSuccess);
  CHECK(read_text(dir / "levels.csv").rfind("level,gamma,param_count,alpha_hat\n", 0) == 0);
  CHECK(fs::exists(dir / "tree.json"));
}

TEST_CASE("output directory resolution") {
  const auto dir = scratch("env");
  ::setenv(cli::kOutDirEnv, (dir / "from_env").string().c_str(), 1);
  CHECK(run({"bounds", "--k_f", "1"}) == cli::kSuccess);
  CHECK(fs::exists(dir / "from_env" / "report.json"));
  CHECK(run({"bounds", "--k_f", "1", "--out", (dir / "from_flag").string()}) == cli::kSuccess);
  CHECK(fs::exists(dir / "from_flag" / "report.json"));
  ::unsetenv(cli::kOutDirEnv);

  {
    std::ofstream f(dir / "cfg.txt");
    f << "k_f = 2\nseed = 5\nout = " << (dir / "from_cfg").string() << "\n";
  }
  CHECK(run({"bounds", "--config", (dir / "cfg.txt").string()}) == cli::kSuccess);
  const auto rep = read_json(dir / "from_cfg" / "report.json");
  CHECK(rep["config"]["master_seed"] == 5);
}

TEST_CASE("repeated runs reproduce the results payload") {
  cli::RunConfig cfg;
  cfg.subcommand = "cover-sim";
  cfg.values = {{"d", "2"}, {"gamma", "0.5"}, {"trials", "40"}, {"point_trials", "300"}, {"mc_samples", "2000"},
                {"density", R"({"kind": "truncated-gaussian", "mean": [0.1, 0], "cov": [[0.4, 0], [0, 0.4]]})"}};
  cfg.master_seed = 3;
  const auto a = cli::execute(cfg).results.dump();
  const auto b = cli::execute(cfg).results.dump();
  CHECK(a == b);
  cfg.master_seed = 4;
  CHECK(cli::execute(cfg).results.dump() != a);

  cfg.subcommand = "nope";
  CHECK_ERROR_KIND(cli::execute(cfg), ErrorKind::invalid_argument);
}

}  // TEST_SUITE

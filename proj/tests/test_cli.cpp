#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = mdd::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name, const std::string& contents) {
  const fs::path dir = fs::temp_directory_path() / "mdd_cli_tests";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p, std::ios::binary) << contents;
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("usage") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"--format", "xml", "bench"}).code == 2);
}

TEST_CASE("test command") {
  const std::string pts = scratch("pts.csv", "x\n0\n1\n").string();
  const std::string lab = scratch("lab.csv", "a\nb\n").string();

  const Run text = run({"--seed", "1", "test", "--points", pts, "--labels", lab, "-B", "9"});
  CHECK(text.code == 0);
  CHECK(text.out.find("MDD=0.125, p=1, n=2, R=2") != std::string::npos);

  const Run j = run({"--seed", "1", "--format", "json", "test", "--points", pts, "--labels", lab, "-B", "9"});
  REQUIRE(j.code == 0);
  const json r = json::parse(j.out);
  CHECK(r["statistic"] == 0.125);
  CHECK(r["n"] == 2);
  CHECK(r["R"] == 2);
  CHECK(r["permutations"] == 9);
  CHECK(r["seed"] == 1);

  const Run csv = run({"--seed", "1", "--format", "csv", "test", "--points", pts, "--labels", lab, "-B", "9"});
  CHECK(csv.out.find("reject") != std::string::npos);

  const fs::path out_file = fs::temp_directory_path() / "mdd_cli_tests" / "result.json";
  const Run to_file = run({"--seed", "1", "--output", out_file.string(), "test", "--points", pts, "--labels", lab});
  CHECK(to_file.code == 0);
  CHECK(json::parse(slurp(out_file))["statistic"] == 0.125);

  SUBCASE("entropy seed is reported") {
    const Run e = run({"test", "--points", pts, "--labels", lab, "-B", "9"});
    CHECK(e.code == 0);
    CHECK(e.err.find("drawn from system entropy") != std::string::npos);
  }
  SUBCASE("precomputed matrix") {
    const std::string m = scratch("m.csv", "0,1\n1,0\n").string();
    CHECK(run({"--seed", "1", "test", "--matrix", m, "--labels", lab}).out.find("MDD=0.125") != std::string::npos);
    CHECK(run({"test", "--matrix", m, "--points", pts, "--labels", lab}).code == 2);
  }
  SUBCASE("input errors") {
    const std::string three = scratch("lab3.csv", "a\nb\na\n").string();
    const Run mismatch = run({"--seed", "1", "test", "--points", pts, "--labels", three});
    CHECK(mismatch.code == 2);
    CHECK(mismatch.err.find("label count 3 does not match point count 2") != std::string::npos);
    CHECK(run({"test", "--points", "/nonexistent.csv", "--labels", lab}).code == 2);
    CHECK(run({"test", "--points", pts}).code == 2);
    const std::string bad = scratch("bad.csv", "0\nfoo\n").string();
    CHECK(run({"--seed", "1", "test", "--points", bad, "--labels", lab}).code == 2);
  }
  SUBCASE("domain errors") {
    const std::string neg = scratch("neg.csv", "0,-1\n-1,0\n").string();
    const Run r2 = run({"--seed", "1", "test", "--matrix", neg, "--labels", lab});
    CHECK(r2.code == 3);
    CHECK(r2.err.find("NegativeDistance") != std::string::npos);
    const std::string off = scratch("off.csv", "1,0\n0.5,0.5\n").string();
    CHECK(run({"--seed", "1", "test", "--points", off, "--metric", "geodesic", "--labels", lab}).code == 3);
  }
}

TEST_CASE("simulate command") {
  const std::string config = scratch("grid.json", R"({
    "name": "cli", "master_seed": 5, "permutations": 19, "reps": 2,
    "cells": [{"scenario": "sim1", "classes": 2, "n": 20, "column": [1, 3]}]})").string();
  const Run a = run({"--format", "json", "simulate", config, "--quiet"});
  REQUIRE(a.code == 0);
  const Run b = run({"--format", "json", "simulate", config, "--quiet"});
  CHECK(a.out == b.out);
  const json report = json::parse(a.out);
  CHECK(report["cells"].size() == 2);
  CHECK(report["master_seed"] == 5);

  const Run reseeded = run({"--seed", "6", "--format", "json", "simulate", config, "--quiet", "--reps", "1"});
  CHECK(json::parse(reseeded.out)["master_seed"] == 6);
  CHECK(json::parse(reseeded.out)["cells"][0]["reps"] == 1);

  CHECK(run({"--format", "csv", "simulate", config, "--quiet"}).out.starts_with("scenario,"));
  CHECK(run({"simulate", config, "--quiet"}).out.find("sim1") != std::string::npos);
  CHECK(run({"simulate", config, "--quiet", "--reps", "0"}).code == 2);
  CHECK(run({"simulate", "no_such_preset", "--quiet"}).code == 2);
  const std::string broken = scratch("broken.json", "{\"cells\": [").string();
  CHECK(run({"simulate", broken, "--quiet"}).code == 2);
}

TEST_CASE("bench command") {
  const Run r = run({"--seed", "1", "--format", "json", "bench", "--n", "20,40", "-R", "2"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["rows"].size() == 2);
  CHECK(run({"bench", "--n", "40,20"}).code == 2);
  CHECK(run({"bench", "--n", "4", "-R", "5"}).code == 2);
}

TEST_CASE("adjust command") {
  const std::string p = scratch("p.csv", "p\n0.01\n0.02\n0.03\n0.04\n").string();
  const Run r = run({"adjust", p});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("p,p_adjusted") != std::string::npos);
  CHECK(r.out.find("0.04,0.04") != std::string::npos);

  const std::string bare = scratch("bare.csv", "0.5\n0.01\n").string();
  const Run b = run({"adjust", bare});
  CHECK(b.code == 0);
  CHECK(b.out.find("p_adjusted") == std::string::npos);

  const std::string bad = scratch("pbad.csv", "p\n0.2\n1.2\n").string();
  const Run e = run({"adjust", bad});
  CHECK(e.code == 2);
  CHECK(e.err.find("row 3") != std::string::npos);

  const fs::path dir = fs::temp_directory_path() / "mdd_cli_tests" / "results";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string pts = scratch("pts2.csv", "0\n1\n2\n3\n").string();
  const std::string lab = scratch("lab2.csv", "a\na\nb\nb\n").string();
  for (int k = 0; k < 2; ++k)
    run({"--seed", std::to_string(k), "--output", (dir / ("r" + std::to_string(k) + ".json")).string(), "test",
         "--points", pts, "--labels", lab, "-B", "9"});
  const Run d = run({"adjust", dir.string()});
  CHECK(d.code == 0);
  CHECK(d.out.find("file,p_value,p_adjusted") != std::string::npos);
  CHECK(d.out.find("r1.json") != std::string::npos);
}

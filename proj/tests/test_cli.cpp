/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "cli_app.hpp"
#include "spbe/spbe.h"

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "spbe");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = spbe_cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

json read_json(const fs::path& p) {
  std::ifstream in(p);
  return json::parse(in);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("spbe-cli-" + std::to_string(::getpid()) + "-" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string at(const std::string& rel) const { return (dir_ / rel).string(); }
  fs::path dir_;
};

TEST_F(Cli, ExportWritesSystemAndManifest) {
  const Result r = run({"export-fixture", "example1", "--out", at("ex1")});
  ASSERT_EQ(r.code, 0) << r.err;
  for (const char* f : {"E.mtx", "F.mtx", "H.mtx", "G.mtx", "q.mtx", "r.mtx", "u.mtx", "p.mtx"}) {
    EXPECT_TRUE(fs::exists(dir_ / "ex1" / f)) << f;
  }
  const json m = read_json(dir_ / "ex1" / "manifest.json");
  EXPECT_EQ(m["case"], "i");
  EXPECT_EQ(m["n"], 5);
  EXPECT_EQ(m["m"], 4);
  EXPECT_TRUE(m["candidate"].get<bool>());
}

TEST_F(Cli, AnalyzeMatchesLibraryAndVerifyRoundTrips) {
  ASSERT_EQ(run({"export-fixture", "example1", "--out", at("ex1")}).code, 0);
  const Result a = run({"analyze", "--input-dir", at("ex1"), "--sparsity", "both",
                        "--emit-perturbations", at("pert"), "--out", at("report.json")});
  ASSERT_EQ(a.code, 0) << a.err;
  const json rep = read_json(dir_ / "report.json");

  spbe_system* sys = nullptr;
  spbe_solution* cand = nullptr;
  ASSERT_EQ(spbe_fixture_load("example1", &sys, &cand, nullptr), SPBE_OK);
  spbe_weights w{};
  ASSERT_EQ(spbe_default_weights(sys, 0, &w), SPBE_OK);
  double rg = 0;
  ASSERT_EQ(spbe_unstructured_be(sys, cand, &rg), SPBE_OK);
  EXPECT_EQ(rep["unstructured_be"]["value"].get<double>(), rg);
  for (const auto& [name, preserve] : {std::pair{"preserve", 1}, std::pair{"ignore", 0}}) {
    spbe_report* lib = nullptr;
    ASSERT_EQ(spbe_structured_be(sys, cand, &w, preserve, SPBE_PATH_AUTO, &lib), SPBE_OK);
    spbe_report_summary s{};
    spbe_report_summary_get(lib, &s);
    EXPECT_EQ(rep["structured"][name]["xi"]["value"].get<double>(), s.xi) << name;
    EXPECT_EQ(rep["structured"][name]["diagnostics"]["violations"], 0);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4e", s.xi);
    EXPECT_EQ(rep["structured"][name]["xi"]["display"], buf);
    spbe_report_free(lib);
  }
  spbe_solution_free(cand);
  spbe_system_free(sys);

  const Result v = run({"verify", "--input-dir", at("ex1"), "--perturbations", at("pert/preserve"),
                        "--out", at("verify.json")});
  ASSERT_EQ(v.code, 0) << v.err;
  const json d = read_json(dir_ / "verify.json")["diagnostics"];
  EXPECT_EQ(d["violations"], 0);
  EXPECT_TRUE(d["feasible"].get<bool>());
  EXPECT_EQ(d["weighted_norm"]["value"].get<double>(),
            rep["structured"]["preserve"]["diagnostics"]["weighted_norm"]["value"].get<double>());
}

TEST_F(Cli, ReportsAreDeterministic) {
  ASSERT_EQ(run({"export-fixture", "example3", "--out", at("ex3")}).code, 0);
  ASSERT_EQ(run({"analyze", "--input-dir", at("ex3"), "--out", at("a.json")}).code, 0);
  ASSERT_EQ(run({"analyze", "--input-dir", at("ex3"), "--out", at("b.json")}).code, 0);
  EXPECT_EQ(slurp(dir_ / "a.json"), slurp(dir_ / "b.json"));
}

TEST_F(Cli, ExactSolutionGivesZero) {
  ASSERT_EQ(run({"export-fixture", "example4:t=2", "--out", at("ex4")}).code, 0);
  const Result r = run({"analyze", "--input-dir", at("ex4"), "--u", at("ex4/u_exact.mtx"), "--p",
                        at("ex4/p_exact.mtx"), "--exclude-zero-rhs", "--out", at("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = read_json(dir_ / "r.json");
  EXPECT_LE(rep["unstructured_be"]["value"].get<double>(), 1e-14);
  EXPECT_LE(rep["structured"]["preserve"]["xi"]["value"].get<double>(), 1e-14);
  EXPECT_LE(rep["structured"]["ignore"]["xi"]["value"].get<double>(), 1e-14);
  EXPECT_EQ(rep["structured"]["preserve"]["path"], "real");
}

TEST_F(Cli, TruncatedMatrixIsParseError) {
  ASSERT_EQ(run({"export-fixture", "example1", "--out", at("ex1")}).code, 0);
  std::string text = slurp(dir_ / "ex1" / "F.mtx");
  text = text.substr(0, text.rfind('\n', text.size() - 2) + 1);
  std::ofstream(dir_ / "ex1" / "F.mtx") << text;
  const Result r = run({"analyze", "--input-dir", at("ex1")});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("F.mtx:"), std::string::npos) << r.err;
  EXPECT_NE(r.err.find("unexpected end of file"), std::string::npos) << r.err;
}

TEST_F(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"frobnicate"}).code, 1);
  EXPECT_EQ(run({"analyze"}).code, 1);
  EXPECT_EQ(run({"export-fixture", "example1"}).code, 1);
  EXPECT_EQ(run({"analyze", "--input-dir", at("x"), "--sparsity", "sometimes"}).code, 1);
  ASSERT_EQ(run({"export-fixture", "example1", "--out", at("ex1")}).code, 0);
  fs::remove(dir_ / "ex1" / "manifest.json");
  const Result r = run({"analyze", "--input-dir", at("ex1")});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("--case"), std::string::npos);
  EXPECT_EQ(run({"analyze", "--input-dir", at("ex1"), "--case", "iii"}).code, 2);
  EXPECT_EQ(run({"stability", "--fixture", "example3", "--t", "4..5"}).code, 1);
  EXPECT_EQ(run({"stability"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(Cli, ZeroRhsNeedsExclusionFlag) {
  ASSERT_EQ(run({"export-fixture", "example4:t=2", "--out", at("ex4")}).code, 0);
  std::ofstream(dir_ / "ex4" / "u.mtx") << slurp(dir_ / "ex4" / "u_exact.mtx");
  std::ofstream(dir_ / "ex4" / "p.mtx") << slurp(dir_ / "ex4" / "p_exact.mtx");
  // q, r of the Stokes-like system are nonzero, so relative weights work.
  EXPECT_EQ(run({"analyze", "--input-dir", at("ex4")}).code, 0);
  std::ofstream(dir_ / "ex4" / "r.mtx") << "%%MatrixMarket matrix array real general\n4 1\n0\n0\n0\n0\n";
  EXPECT_EQ(run({"analyze", "--input-dir", at("ex4")}).code, 1);
  EXPECT_EQ(run({"analyze", "--input-dir", at("ex4"), "--exclude-zero-rhs"}).code, 0);
}

TEST_F(Cli, WeightsFile) {
  ASSERT_EQ(run({"export-fixture", "example1", "--out", at("ex1")}).code, 0);
  std::ofstream(dir_ / "w.json")
      << R"({"alpha1": 1, "alpha2": 1, "alpha3": 1, "beta1": 1, "beta2": 1})";
  const Result r = run({"analyze", "--input-dir", at("ex1"), "--weights", at("w.json"), "--out",
                        at("r.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json rep = read_json(dir_ / "r.json");
  EXPECT_EQ(rep["weights"]["alpha4"], "excluded");
  EXPECT_EQ(rep["weights"]["alpha1"], 1.0);
  const Result u = run({"analyze", "--input-dir", at("ex1"), "--weights", "unit", "--out", at("u.json")});
  ASSERT_EQ(u.code, 0);
  EXPECT_EQ(read_json(dir_ / "u.json")["structured"], rep["structured"]);

  std::ofstream(dir_ / "bad.json") << R"({"alpha1": -1, "alpha2": 1, "alpha3": 1, "beta1": 1, "beta2": 1})";
  EXPECT_EQ(run({"analyze", "--input-dir", at("ex1"), "--weights", at("bad.json")}).code, 1);
  std::ofstream(dir_ / "broken.json") << "{";
  EXPECT_EQ(run({"analyze", "--input-dir", at("ex1"), "--weights", at("broken.json")}).code, 2);
  // Excluding everything that touches the r rows is infeasible.
  std::ofstream(dir_ / "inf.json")
      << R"({"alpha1": 1, "alpha2": "excluded", "alpha3": "excluded", "beta1": 1, "beta2": "excluded"})";
  EXPECT_EQ(run({"analyze", "--input-dir", at("ex1"), "--weights", at("inf.json")}).code, 3);
}

TEST_F(Cli, VerifyDetectsEditsAndZeroPerturbations) {
  ASSERT_EQ(run({"export-fixture", "example1", "--out", at("ex1")}).code, 0);
  ASSERT_EQ(run({"analyze", "--input-dir", at("ex1"), "--emit-perturbations", at("pert"), "--out",
                 at("a.json")}).code, 0);
  // Rewrite dE in general storage with one off-diagonal entry changed.
  spbe_perturbation* p = nullptr;
  ASSERT_EQ(spbe_perturbation_load(at("pert/preserve").c_str(), &p), SPBE_OK);
  double re = 0, im = 0;
  spbe_perturbation_entry(p, 'E', 2, 0, &re, &im);
  spbe_perturbation_set_entry(p, 'E', 2, 0, re + 1e-3, im);
  ASSERT_EQ(spbe_perturbation_save(p, at("edited").c_str()), SPBE_OK);
  spbe_perturbation_free(p);
  const Result v = run({"verify", "--input-dir", at("ex1"), "--perturbations", at("edited"), "--out",
                        at("v.json")});
  ASSERT_EQ(v.code, 0) << v.err;
  const json d = read_json(dir_ / "v.json")["diagnostics"];
  EXPECT_GT(d["hermitian_deviation_e"].get<double>(), 0.0);
  EXPECT_GT(d["violations"].get<int>(), 0);

  // All-zero perturbations leave exactly the candidate's residual.
  fs::create_directories(dir_ / "zero");
  auto zero = [&](const char* name, int r, int c) {
    std::ofstream(dir_ / "zero" / name) << "%%MatrixMarket matrix coordinate real general\n"
                                        << r << ' ' << c << " 0\n";
  };
  zero("dE.mtx", 5, 5);
  zero("dF.mtx", 4, 5);
  zero("dH.mtx", 4, 5);
  zero("dG.mtx", 4, 4);
  zero("dq.mtx", 5, 1);
  zero("dr.mtx", 4, 1);
  const Result z = run({"verify", "--input-dir", at("ex1"), "--perturbations", at("zero"), "--out",
                        at("z.json")});
  ASSERT_EQ(z.code, 0) << z.err;
  const double res = read_json(dir_ / "z.json")["diagnostics"]["perturbed_residual_norm"]["value"];
  const double expect = read_json(dir_ / "a.json")["residual_norm"]["value"];
  EXPECT_NEAR(res, expect, 1e-14 * expect);
}

TEST_F(Cli, StabilitySweepAndSolvers) {
  const Result r = run({"stability", "--fixture", "example4", "--t", "2..3", "--tol", "1e-11",
                        "--out", at("st.json"), "--csv", at("st.csv")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json st = read_json(dir_ / "st.json");
  ASSERT_EQ(st["rows"].size(), 2u);
  EXPECT_EQ(st["rows"][0]["order"], 12);
  EXPECT_EQ(st["rows"][1]["order"], 27);
  EXPECT_TRUE(st["rows"][0]["converged"].get<bool>());
  EXPECT_NE(r.out.find("example4:t=3"), std::string::npos);
  EXPECT_NE(slurp(dir_ / "st.csv").find("label,order,iterations"), std::string::npos);

  const Result g = run({"stability", "--fixture", "example3", "--solver", "gepp", "--threshold", "1e-12",
                        "--out", at("g.json")});
  ASSERT_EQ(g.code, 0) << g.err;
  EXPECT_TRUE(read_json(dir_ / "g.json")["rows"][0]["backward_stable"].get<bool>());

  // An iteration limit that is too small is reported, not an error.
  const Result n = run({"stability", "--fixture", "example4:t=3", "--tol", "1e-14", "--maxit", "2",
                        "--out", at("n.json")});
  ASSERT_EQ(n.code, 0) << n.err;
  EXPECT_FALSE(read_json(dir_ / "n.json")["rows"][0]["converged"].get<bool>());
}

TEST_F(Cli, StabilityOnIdentityFiles) {
  const fs::path d = dir_ / "id";
  fs::create_directories(d);
  std::ofstream(d / "E.mtx") << "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1\n2 2 1\n";
  std::ofstream(d / "F.mtx") << "%%MatrixMarket matrix coordinate real general\n1 2 0\n";
  std::ofstream(d / "H.mtx") << "%%MatrixMarket matrix coordinate real general\n1 2 0\n";
  std::ofstream(d / "G.mtx") << "%%MatrixMarket matrix coordinate real general\n1 1 1\n1 1 1\n";
  std::ofstream(d / "q.mtx") << "%%MatrixMarket matrix array real general\n2 1\n1\n-2\n";
  std::ofstream(d / "r.mtx") << "%%MatrixMarket matrix array real general\n1 1\n3\n";
  const Result r = run({"stability", "--input-dir", d.string(), "--case", "iii", "--tol", "1e-12",
                        "--out", at("id.json")});
  ASSERT_EQ(r.code, 0) << r.err;
  const json row = read_json(dir_ / "id.json")["rows"][0];
  EXPECT_TRUE(row["converged"].get<bool>());
  EXPECT_EQ(row["iterations"], 1);
  EXPECT_LE(row["unstructured_be"]["value"].get<double>(), 1e-15);
  EXPECT_LE(row["xi_sparse"]["value"].get<double>(), 1e-15);
  EXPECT_TRUE(row["strongly_backward_stable"].get<bool>());
}

}  // namespace

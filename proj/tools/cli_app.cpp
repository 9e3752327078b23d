/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "cli_app.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unistd.h>
#include <vector>

#include "spbe/spbe.h"

namespace spbe_cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct CliError {
  int code;
  std::string message;
};

int exit_code_for(spbe_status s) {
  switch (s) {
    case SPBE_OK: return kSuccess;
    case SPBE_ERR_INVALID_ARGUMENT: return kUsage;
    case SPBE_ERR_DIMENSION:
    case SPBE_ERR_STRUCTURE:
    case SPBE_ERR_PARSE:
    case SPBE_ERR_IO: return kParse;
    default: return kNumerical;
  }
}

void check(spbe_status s) {
  if (s != SPBE_OK) {
    throw CliError{exit_code_for(s), std::string(spbe_status_name(s)) + ": " + spbe_last_error()};
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using System = std::unique_ptr<spbe_system, Deleter<spbe_system, spbe_system_free>>;
using Solution = std::unique_ptr<spbe_solution, Deleter<spbe_solution, spbe_solution_free>>;
using Report = std::unique_ptr<spbe_report, Deleter<spbe_report, spbe_report_free>>;
using Perturbation =
    std::unique_ptr<spbe_perturbation, Deleter<spbe_perturbation, spbe_perturbation_free>>;
using Trace = std::unique_ptr<spbe_trace, Deleter<spbe_trace, spbe_trace_free>>;

std::string display(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4e", x);
  return buf;
}

json number(double x) { return json{{"value", x}, {"display", display(x)}}; }

const char* case_text(spbe_case c) {
  switch (c) {
    case SPBE_CASE_I: return "i";
    case SPBE_CASE_II: return "ii";
    case SPBE_CASE_III: return "iii";
  }
  return "?";
}

spbe_case parse_case_text(const std::string& s) {
  if (s == "i" || s == "1") return SPBE_CASE_I;
  if (s == "ii" || s == "2") return SPBE_CASE_II;
  if (s == "iii" || s == "3") return SPBE_CASE_III;
  throw CliError{kUsage, "unknown case '" + s + "' (expected i, ii or iii)"};
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp-" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw CliError{kParse, "cannot write " + tmp.string()};
    out << text;
    if (!out.flush()) throw CliError{kParse, "write failed for " + tmp.string()};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw CliError{kParse, "cannot rename to " + path.string() + ": " + ec.message()};
}

json read_json(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw CliError{kParse, "cannot open " + path.string()};
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw CliError{kParse, path.string() + ": " + e.what()};
  }
}

struct Inputs {
  std::string input_dir;
  std::string case_name;
  std::string u_path;
  std::string p_path;
};

spbe_case resolve_case(const Inputs& in) {
  if (!in.case_name.empty()) return parse_case_text(in.case_name);
  const fs::path manifest = fs::path(in.input_dir) / "manifest.json";
  if (fs::exists(manifest)) {
    const json m = read_json(manifest);
    if (m.contains("case") && m["case"].is_string()) return parse_case_text(m["case"]);
  }
  throw CliError{kUsage, "structure case unknown: pass --case or provide manifest.json"};
}

System load_system(const Inputs& in, spbe_case c) {
  spbe_system* raw = nullptr;
  check(spbe_system_load(in.input_dir.c_str(), c, &raw));
  return System(raw);
}

Solution load_solution(const Inputs& in) {
  const fs::path dir(in.input_dir);
  const std::string u = in.u_path.empty() ? (dir / "u.mtx").string() : in.u_path;
  const std::string p = in.p_path.empty() ? (dir / "p.mtx").string() : in.p_path;
  spbe_solution* raw = nullptr;
  check(spbe_solution_load(u.c_str(), p.c_str(), &raw));
  return Solution(raw);
}

const char* const kWeightKeys[6] = {"alpha1", "alpha2", "alpha3", "alpha4", "beta1", "beta2"};

spbe_weights resolve_weights(const std::string& spec, const spbe_system* sys, bool exclude_zero_rhs) {
  spbe_weights w{};
  if (spec == "relative") {
    check(spbe_default_weights(sys, exclude_zero_rhs ? 1 : 0, &w));
    return w;
  }
  if (spec == "unit") {
    check(spbe_uniform_weights(spbe_system_case(sys), 1.0, &w));
    return w;
  }
  const json j = read_json(spec);
  if (!j.is_object()) throw CliError{kParse, spec + ": weights file must be a JSON object"};
  const bool three = spbe_system_case(sys) == SPBE_CASE_III;
  for (int k = 0; k < 6; ++k) {
    const char* key = kWeightKeys[k];
    if (!j.contains(key)) {
      if (k == SPBE_ALPHA4 && !three) {
        w.excluded[k] = 1;
        continue;
      }
      throw CliError{kUsage, spec + ": missing weight '" + key + "'"};
    }
    const json& v = j[key];
    if (v.is_string() && v.get<std::string>() == "excluded") {
      w.excluded[k] = 1;
    } else if (v.is_number()) {
      w.value[k] = v.get<double>();
      if (!(w.value[k] > 0.0) || !std::isfinite(w.value[k])) {
        throw CliError{kUsage, spec + ": weight '" + key + "' must be positive and finite"};
      }
    } else {
      throw CliError{kUsage, spec + ": weight '" + key + "' must be a number or \"excluded\""};
    }
  }
  return w;
}

json weights_json(const spbe_weights& w) {
  json out = json::object();
  for (int k = 0; k < 6; ++k) {
    out[kWeightKeys[k]] = w.excluded[k] ? json("excluded") : json(w.value[k]);
  }
  return out;
}

int64_t violation_total(const spbe_diagnostics& d) {
  return d.mask_violations + d.excluded_violations + (d.hermitian_deviation_e > 0.0 ? 1 : 0) +
         (d.hermitian_deviation_g > 0.0 ? 1 : 0) + (d.shared_f_deviation > 0.0 ? 1 : 0);
}

json diagnostics_json(const spbe_diagnostics& d) {
  return json{
      {"perturbed_residual_norm", number(d.perturbed_residual_norm)},
      {"residual_scale", d.residual_scale},
      {"feasible", d.perturbed_residual_norm <= 1e-10 * d.residual_scale},
      {"hermitian_deviation_e", d.hermitian_deviation_e},
      {"hermitian_deviation_g", d.hermitian_deviation_g},
      {"shared_f_deviation", d.shared_f_deviation},
      {"mask_violations", d.mask_violations},
      {"excluded_violations", d.excluded_violations},
      {"weighted_norm", d.has_weighted_norm ? number(d.weighted_norm) : json(nullptr)},
      {"violations", violation_total(d)},
  };
}

spbe_path parse_path(const std::string& s) {
  if (s == "auto") return SPBE_PATH_AUTO;
  if (s == "complex") return SPBE_PATH_COMPLEX;
  if (s == "real") return SPBE_PATH_REAL;
  throw CliError{kUsage, "unknown path '" + s + "'"};
}

void emit(const json& report, const std::string& out_path, std::ostream& out) {
  const std::string text = report.dump(2) + "\n";
  if (out_path.empty()) {
    out << text;
  } else {
    write_text_atomic(out_path, text);
  }
}

// analyze

struct AnalyzeOptions {
  Inputs in;
  std::string sparsity = "both";
  std::string weights = "relative";
  bool exclude_zero_rhs = false;
  std::string path = "auto";
  std::string emit_dir;
  std::string out;
};

int cmd_analyze(const AnalyzeOptions& o, std::ostream& out) {
  const spbe_case c = resolve_case(o.in);
  System sys = load_system(o.in, c);
  Solution sol = load_solution(o.in);
  const spbe_weights w = resolve_weights(o.weights, sys.get(), o.exclude_zero_rhs);
  int64_t n = 0, m = 0;
  check(spbe_system_dims(sys.get(), &n, &m));

  double residual = 0.0, rg = 0.0;
  check(spbe_residual_norm(sys.get(), sol.get(), &residual));
  check(spbe_unstructured_be(sys.get(), sol.get(), &rg));

  json report{{"command", "analyze"}, {"case", case_text(c)}, {"n", n}, {"m", m},
              {"weights", weights_json(w)}, {"residual_norm", number(residual)},
              {"unstructured_be", number(rg)}};
  std::vector<std::pair<std::string, bool>> modes;
  if (o.sparsity == "preserve" || o.sparsity == "both") modes.emplace_back("preserve", true);
  if (o.sparsity == "ignore" || o.sparsity == "both") modes.emplace_back("ignore", false);

  std::ostringstream summary;
  summary << "residual_norm " << display(residual) << "\nunstructured_be " << display(rg) << "\n";
  json structured = json::object();
  for (const auto& [name, preserve] : modes) {
    spbe_report* raw = nullptr;
    check(spbe_structured_be(sys.get(), sol.get(), &w, preserve ? 1 : 0, parse_path(o.path), &raw));
    Report rep(raw);
    spbe_report_summary s{};
    check(spbe_report_summary_get(rep.get(), &s));
    json entry{{"xi", number(s.xi)},
               {"sparsity_preserved", s.sparsity_preserved != 0},
               {"path", s.real_path ? "real" : "complex"},
               {"rows", s.rows},
               {"columns", s.columns},
               {"diagnostics", diagnostics_json(s.diagnostics)}};
    if (!o.emit_dir.empty()) {
      const fs::path dir = fs::path(o.emit_dir) / name;
      spbe_perturbation* p = nullptr;
      check(spbe_report_perturbation(rep.get(), &p));
      Perturbation pert(p);
      check(spbe_perturbation_save(pert.get(), dir.string().c_str()));
      entry["perturbations_dir"] = dir.string();
    }
    structured[name] = entry;
    summary << "xi_" << name << " " << display(s.xi) << "\n";
  }
  report["structured"] = structured;
  emit(report, o.out, out);
  if (!o.out.empty()) out << summary.str();
  return kSuccess;
}

// verify

struct VerifyOptions {
  Inputs in;
  std::string perturbations;
  std::string weights = "relative";
  bool exclude_zero_rhs = false;
  std::string sparsity = "preserve";
  std::string out;
};

int cmd_verify(const VerifyOptions& o, std::ostream& out) {
  const spbe_case c = resolve_case(o.in);
  System sys = load_system(o.in, c);
  Solution sol = load_solution(o.in);
  const spbe_weights w = resolve_weights(o.weights, sys.get(), o.exclude_zero_rhs);
  spbe_perturbation* raw = nullptr;
  check(spbe_perturbation_load(o.perturbations.c_str(), &raw));
  Perturbation pert(raw);
  spbe_diagnostics d{};
  check(spbe_verify(sys.get(), sol.get(), pert.get(), &w, o.sparsity == "preserve" ? 1 : 0, &d));
  json report{{"command", "verify"},
              {"case", case_text(c)},
              {"sparsity_checked", o.sparsity == "preserve"},
              {"diagnostics", diagnostics_json(d)}};
  emit(report, o.out, out);
  if (!o.out.empty()) {
    out << "perturbed_residual_norm " << display(d.perturbed_residual_norm) << "\n"
        << "hermitian_deviation_e " << display(d.hermitian_deviation_e) << "\n"
        << "hermitian_deviation_g " << display(d.hermitian_deviation_g) << "\n"
        << "mask_violations " << d.mask_violations << "\n"
        << "weighted_norm " << (d.has_weighted_norm ? display(d.weighted_norm) : "n/a") << "\n"
        << "violations " << violation_total(d) << "\n";
  }
  return kSuccess;
}

// stability

struct StabilityOptions {
  std::string fixture;
  std::string input_dir;
  std::string case_name;
  std::string t_range;
  std::string solver = "gmres";
  double tol = 1e-8;
  int64_t maxit = 0;
  std::optional<double> threshold;
  double threshold_factor = 1e4;
  std::string weights = "relative";
  bool exclude_zero_rhs = false;
  std::string out;
  std::string csv;
};

std::vector<int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    if (dots == std::string::npos) return {std::stoi(text)};
    const int a = std::stoi(text.substr(0, dots));
    const int b = std::stoi(text.substr(dots + 2));
    if (b < a) throw CliError{kUsage, "empty range '" + text + "'"};
    std::vector<int> out;
    for (int t = a; t <= b; ++t) out.push_back(t);
    return out;
  } catch (const std::logic_error&) {
    throw CliError{kUsage, "bad range '" + text + "' (expected T or A..B)"};
  }
}

int cmd_stability(const StabilityOptions& o, std::ostream& out) {
  struct Item {
    std::string label;
    System sys;
  };
  std::vector<Item> items;
  if (!o.fixture.empty() == !o.input_dir.empty()) {
    throw CliError{kUsage, "pass exactly one of --fixture or --input-dir"};
  }
  if (!o.fixture.empty()) {
    std::vector<std::string> ids;
    if (!o.t_range.empty()) {
      if (o.fixture != "example4") throw CliError{kUsage, "--t applies to example4 only"};
      for (int t : parse_range(o.t_range)) ids.push_back("example4:t=" + std::to_string(t));
    } else {
      ids.push_back(o.fixture);
    }
    for (const auto& id : ids) {
      spbe_system* raw = nullptr;
      check(spbe_fixture_load(id.c_str(), &raw, nullptr, nullptr));
      items.push_back({id, System(raw)});
    }
  } else {
    Inputs in{o.input_dir, o.case_name, "", ""};
    const spbe_case c = resolve_case(in);
    items.push_back({o.input_dir, load_system(in, c)});
  }
  if (o.solver != "gmres" && o.solver != "gepp") throw CliError{kUsage, "unknown solver " + o.solver};
  const double threshold = o.threshold.value_or(spbe_default_threshold(o.threshold_factor));

  json rows = json::array();
  std::ostringstream table, csv;
  table << "label                    order  iters  rel_residual  unstructured_be  xi_sparse    "
           "xi_full      stable  strongly\n";
  csv << "label,order,iterations,converged,final_relative_residual,unstructured_be,xi_sparse,"
         "xi_full,backward_stable,strongly_backward_stable\n";
  for (auto& item : items) {
    int64_t n = 0, m = 0;
    check(spbe_system_dims(item.sys.get(), &n, &m));
    Solution sol;
    int64_t iterations = 0;
    int converged = 1;
    double relres = 0.0;
    if (o.solver == "gmres") {
      spbe_trace* raw = nullptr;
      check(spbe_gmres(item.sys.get(), o.tol, o.maxit > 0 ? o.maxit : n + m, &raw));
      Trace trace(raw);
      check(spbe_trace_info(trace.get(), &iterations, &converged, &relres));
      spbe_solution* s = nullptr;
      check(spbe_trace_solution(trace.get(), &s));
      sol.reset(s);
    } else {
      spbe_solution* s = nullptr;
      check(spbe_gepp(item.sys.get(), &s));
      sol.reset(s);
    }
    const spbe_weights w = resolve_weights(o.weights, item.sys.get(), o.exclude_zero_rhs);
    spbe_stability st{};
    check(spbe_classify_stability(item.sys.get(), sol.get(), &w, threshold, &st));
    json row{{"label", item.label},
             {"order", n + m},
             {"solver", o.solver},
             {"iterations", iterations},
             {"converged", converged != 0},
             {"unstructured_be", number(st.unstructured_be)},
             {"xi_sparse", number(st.xi_sparse)},
             {"xi_full", number(st.xi_full)},
             {"threshold", st.threshold},
             {"backward_stable", st.backward_stable != 0},
             {"strongly_backward_stable", st.strongly_backward_stable != 0}};
    if (o.solver == "gmres") row["final_relative_residual"] = number(relres);
    rows.push_back(row);
    char line[256];
    std::snprintf(line, sizeof line, "%-24s %5lld  %5lld  %12s  %15s  %11s  %11s  %-6s  %s\n",
                  item.label.c_str(), static_cast<long long>(n + m),
                  static_cast<long long>(iterations), display(relres).c_str(),
                  display(st.unstructured_be).c_str(), display(st.xi_sparse).c_str(),
                  display(st.xi_full).c_str(), st.backward_stable ? "yes" : "no",
                  st.strongly_backward_stable ? "yes" : "no");
    table << line;
    csv << item.label << ',' << n + m << ',' << iterations << ',' << converged << ','
        << json(relres).dump() << ',' << json(st.unstructured_be).dump() << ','
        << json(st.xi_sparse).dump() << ',' << json(st.xi_full).dump() << ','
        << st.backward_stable << ',' << st.strongly_backward_stable << '\n';
  }
  json report{{"command", "stability"}, {"solver", o.solver}, {"threshold", threshold},
              {"rows", rows}};
  if (o.solver == "gmres") report["tol"] = o.tol;
  if (!o.csv.empty()) write_text_atomic(o.csv, csv.str());
  if (o.out.empty()) {
    out << report.dump(2) << "\n";
  } else {
    write_text_atomic(o.out, report.dump(2) + "\n");
    out << table.str();
  }
  return kSuccess;
}

// export-fixture

int cmd_export(const std::string& id, const std::string& dir, std::ostream& out) {
  spbe_system* raw = nullptr;
  spbe_solution* cand = nullptr;
  spbe_solution* exact = nullptr;
  check(spbe_fixture_load(id.c_str(), &raw, &cand, &exact));
  System sys(raw);
  Solution candidate(cand), exact_sol(exact);
  check(spbe_system_save(sys.get(), dir.c_str()));
  const fs::path d(dir);
  if (candidate) {
    check(spbe_solution_save(candidate.get(), (d / "u.mtx").string().c_str(),
                             (d / "p.mtx").string().c_str()));
  }
  if (exact_sol) {
    check(spbe_solution_save(exact_sol.get(), (d / "u_exact.mtx").string().c_str(),
                             (d / "p_exact.mtx").string().c_str()));
  }
  int64_t n = 0, m = 0;
  check(spbe_system_dims(sys.get(), &n, &m));
  json manifest{{"fixture", id},
                {"case", case_text(spbe_system_case(sys.get()))},
                {"n", n},
                {"m", m},
                {"candidate", candidate != nullptr},
                {"exact_solution", exact_sol != nullptr}};
  write_text_atomic(d / "manifest.json", manifest.dump(2) + "\n");
  out << "exported " << id << " to " << dir << "\n";
  return kSuccess;
}

void add_inputs(CLI::App* cmd, Inputs& in) {
  cmd->add_option("--input-dir", in.input_dir, "Directory with E.mtx F.mtx [H.mtx] G.mtx q.mtx r.mtx")
      ->required();
  cmd->add_option("--case", in.case_name, "Structure case: i, ii or iii (default: manifest.json)");
  cmd->add_option("--u", in.u_path, "Candidate u vector (default: <input-dir>/u.mtx)");
  cmd->add_option("--p", in.p_path, "Candidate p vector (default: <input-dir>/p.mtx)");
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Structured backward errors for generalized saddle point systems", "spbe"};
  app.require_subcommand(1);

  AnalyzeOptions ao;
  auto* analyze = app.add_subcommand("analyze", "Backward errors of a candidate solution");
  add_inputs(analyze, ao.in);
  analyze->add_option("--sparsity", ao.sparsity, "preserve, ignore or both")
      ->check(CLI::IsMember({"preserve", "ignore", "both"}));
  analyze->add_option("--weights", ao.weights, "relative, unit or a JSON weights file");
  analyze->add_flag("--exclude-zero-rhs", ao.exclude_zero_rhs,
                    "Exclude q or r from perturbation when its norm is zero");
  analyze->add_option("--path", ao.path, "auto, complex or real")
      ->check(CLI::IsMember({"auto", "complex", "real"}));
  analyze->add_option("--emit-perturbations", ao.emit_dir,
                      "Write optimal perturbations under DIR/preserve and DIR/ignore");
  analyze->add_option("--out", ao.out, "JSON report path (default: stdout)");

  VerifyOptions vo;
  auto* verify = app.add_subcommand("verify", "Check a perturbation against a system and solution");
  add_inputs(verify, vo.in);
  verify->add_option("--perturbations", vo.perturbations, "Directory with dE.mtx ... dr.mtx")
      ->required();
  verify->add_option("--weights", vo.weights, "relative, unit or a JSON weights file");
  verify->add_flag("--exclude-zero-rhs", vo.exclude_zero_rhs, "See analyze");
  verify->add_option("--sparsity", vo.sparsity, "preserve (count mask violations) or ignore")
      ->check(CLI::IsMember({"preserve", "ignore"}));
  verify->add_option("--out", vo.out, "JSON report path (default: stdout)");

  StabilityOptions so;
  auto* stability = app.add_subcommand("stability", "Solve, then classify the solver's stability");
  stability->add_option("--fixture", so.fixture, "Fixture id, e.g. example3 or example4");
  stability->add_option("--input-dir", so.input_dir, "System directory instead of a fixture");
  stability->add_option("--case", so.case_name, "Structure case for --input-dir");
  stability->add_option("--t", so.t_range, "example4 grid sizes: T or A..B");
  stability->add_option("--solver", so.solver, "gmres or gepp")
      ->check(CLI::IsMember({"gmres", "gepp"}));
  stability->add_option("--tol", so.tol, "GMRES relative residual tolerance")
      ->check(CLI::PositiveNumber);
  stability->add_option("--maxit", so.maxit, "GMRES iteration limit (default: n+m)");
  stability->add_option("--threshold", so.threshold, "Absolute stability threshold");
  stability->add_option("--threshold-factor", so.threshold_factor,
                        "Threshold as a multiple of 2^-52 (default 1e4)")
      ->check(CLI::PositiveNumber);
  stability->add_option("--weights", so.weights, "relative, unit or a JSON weights file");
  stability->add_flag("--exclude-zero-rhs", so.exclude_zero_rhs, "See analyze");
  stability->add_option("--out", so.out, "JSON report path (default: stdout)");
  stability->add_option("--csv", so.csv, "Also write the table as CSV");

  std::string fixture_id, export_dir;
  auto* exporter = app.add_subcommand("export-fixture", "Write a built-in fixture as files");
  exporter->add_option("fixture", fixture_id, "example1, example3, example4:t=T or random:...")
      ->required();
  exporter->add_option("--out", export_dir, "Output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  }

  try {
    if (analyze->parsed()) return cmd_analyze(ao, out);
    if (verify->parsed()) return cmd_verify(vo, out);
    if (stability->parsed()) return cmd_stability(so, out);
    if (exporter->parsed()) return cmd_export(fixture_id, export_dir, out);
  } catch (const CliError& e) {
    err << "error: " << e.message << "\n";
    return e.code;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kParse;
  }
  return kUsage;
}

}  // namespace spbe_cli

/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
#include "spbe/spbe.h"

#include <filesystem>
#include <new>
#include <optional>
#include <string>

#include "spbe/core.hpp"
#include "spbe/matrix_market.hpp"
#include "spbe/problems.hpp"
#include "spbe/solvers.hpp"
#include "spbe/structured_be.hpp"
#include "spbe/unstructured_be.hpp"

struct spbe_system {
  spbe::GsppSystem value;
};
struct spbe_solution {
  spbe::CandidateSolution value;
};
struct spbe_report {
  spbe::BackwardErrorReport value;
};
struct spbe_perturbation {
  spbe::PerturbationSet value;
};
struct spbe_trace {
  spbe::SolveTrace value;
};

namespace {

namespace fs = std::filesystem;
thread_local std::string g_last_error;

spbe_status to_status(spbe::ErrorCode code) {
  using spbe::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return SPBE_ERR_INVALID_ARGUMENT;
    case ErrorCode::DimensionMismatch: return SPBE_ERR_DIMENSION;
    case ErrorCode::StructureViolation: return SPBE_ERR_STRUCTURE;
    case ErrorCode::Parse: return SPBE_ERR_PARSE;
    case ErrorCode::Io: return SPBE_ERR_IO;
    case ErrorCode::RankDeficient: return SPBE_ERR_RANK_DEFICIENT;
    case ErrorCode::Infeasible: return SPBE_ERR_INFEASIBLE;
    case ErrorCode::Singular: return SPBE_ERR_SINGULAR;
  }
  return SPBE_ERR_INTERNAL;
}

template <typename F>
spbe_status guarded(F&& body) {
  try {
    body();
    g_last_error.clear();
    return SPBE_OK;
  } catch (const spbe::Error& e) {
    g_last_error = e.what();
    return to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return SPBE_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return SPBE_ERR_INTERNAL;
  } catch (...) {
    g_last_error = "unknown failure";
    return SPBE_ERR_INTERNAL;
  }
}

void need(const void* p, const char* name) {
  if (!p) throw spbe::Error(spbe::ErrorCode::InvalidArgument, std::string(name) + " is NULL");
}

spbe::StructureCase to_case(spbe_case c) {
  switch (c) {
    case SPBE_CASE_I: return spbe::StructureCase::CaseI;
    case SPBE_CASE_II: return spbe::StructureCase::CaseII;
    case SPBE_CASE_III: return spbe::StructureCase::CaseIII;
  }
  throw spbe::Error(spbe::ErrorCode::InvalidArgument, "unknown structure case");
}

spbe::Weights to_weights(const spbe_weights& w) {
  auto one = [&](int k) {
    return w.excluded[k] ? spbe::Weight::excluded() : spbe::Weight::of(w.value[k]);
  };
  return {one(SPBE_ALPHA1), one(SPBE_ALPHA2), one(SPBE_ALPHA3),
          one(SPBE_ALPHA4), one(SPBE_BETA1),  one(SPBE_BETA2)};
}

spbe_weights from_weights(const spbe::Weights& w) {
  spbe_weights out{};
  const spbe::Weight* all[6] = {&w.alpha1, &w.alpha2, &w.alpha3, &w.alpha4, &w.beta1, &w.beta2};
  for (int k = 0; k < 6; ++k) {
    out.excluded[k] = all[k]->is_excluded() ? 1 : 0;
    out.value[k] = all[k]->is_excluded() ? 0.0 : all[k]->value();
  }
  return out;
}

spbe_diagnostics from_diagnostics(const spbe::PerturbationDiagnostics& d) {
  spbe_diagnostics out{};
  out.perturbed_residual_norm = d.perturbed_residual_norm;
  out.residual_scale = d.residual_scale;
  out.hermitian_deviation_e = d.hermitian_deviation_e;
  out.hermitian_deviation_g = d.hermitian_deviation_g;
  out.shared_f_deviation = d.shared_f_deviation;
  out.mask_violations = d.mask_violations;
  out.excluded_violations = d.excluded_violations;
  out.has_weighted_norm = d.weighted_norm.has_value() ? 1 : 0;
  out.weighted_norm = d.weighted_norm.value_or(0.0);
  return out;
}

template <typename Set>
auto& block_matrix(Set& p, char block) {
  switch (block) {
    case 'E': return p.dE;
    case 'F': return p.dF;
    case 'H': return p.dH;
    case 'G': return p.dG;
    default: throw spbe::Error(spbe::ErrorCode::InvalidArgument, "unknown matrix block");
  }
}

}  // namespace

extern "C" {

const char* spbe_last_error(void) { return g_last_error.c_str(); }

const char* spbe_status_name(spbe_status status) {
  switch (status) {
    case SPBE_OK: return "ok";
    case SPBE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case SPBE_ERR_DIMENSION: return "dimension mismatch";
    case SPBE_ERR_STRUCTURE: return "structure violation";
    case SPBE_ERR_PARSE: return "parse error";
    case SPBE_ERR_IO: return "i/o error";
    case SPBE_ERR_RANK_DEFICIENT: return "rank deficient";
    case SPBE_ERR_INFEASIBLE: return "infeasible";
    case SPBE_ERR_SINGULAR: return "singular";
    case SPBE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

spbe_status spbe_system_load(const char* dir, spbe_case structure, spbe_system** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    const fs::path d(dir);
    const spbe::StructureCase c = to_case(structure);
    spbe::ComplexMatrix E = spbe::read_matrix_market(d / "E.mtx");
    spbe::ComplexMatrix F = spbe::read_matrix_market(d / "F.mtx");
    spbe::ComplexMatrix G = spbe::read_matrix_market(d / "G.mtx");
    spbe::ComplexVector q = spbe::read_matrix_market_vector(d / "q.mtx");
    spbe::ComplexVector r = spbe::read_matrix_market_vector(d / "r.mtx");
    const bool has_h = fs::exists(d / "H.mtx");
    if (!has_h && !spbe::shares_f(c)) {
      throw spbe::Error(spbe::ErrorCode::Io, "case iii needs " + (d / "H.mtx").string());
    }
    spbe::ComplexMatrix H = has_h ? spbe::read_matrix_market(d / "H.mtx") : F;
    *out = new spbe_system{spbe::GsppSystem(std::move(E), std::move(F), std::move(H),
                                            std::move(G), std::move(q), std::move(r), c)};
  });
}

spbe_status spbe_system_save(const spbe_system* sys, const char* dir) {
  return guarded([&] {
    need(sys, "sys");
    need(dir, "dir");
    const fs::path d(dir);
    fs::create_directories(d);
    const spbe::GsppSystem& s = sys->value;
    spbe::write_matrix_market(d / "E.mtx", s.E());
    spbe::write_matrix_market(d / "F.mtx", s.F(), spbe::MmSymmetry::General);
    spbe::write_matrix_market(d / "H.mtx", s.H(), spbe::MmSymmetry::General);
    spbe::write_matrix_market(d / "G.mtx", s.G());
    spbe::write_matrix_market_vector(d / "q.mtx", s.q());
    spbe::write_matrix_market_vector(d / "r.mtx", s.r());
  });
}

spbe_status spbe_system_with_case(const spbe_system* sys, spbe_case structure,
                                  spbe_system** out) {
  return guarded([&] {
    need(sys, "sys");
    need(out, "out");
    *out = new spbe_system{sys->value.with_case(to_case(structure))};
  });
}

spbe_status spbe_system_dims(const spbe_system* sys, int64_t* n, int64_t* m) {
  return guarded([&] {
    need(sys, "sys");
    if (n) *n = sys->value.n();
    if (m) *m = sys->value.m();
  });
}

spbe_case spbe_system_case(const spbe_system* sys) {
  return sys ? static_cast<spbe_case>(sys->value.structure()) : SPBE_CASE_I;
}

int spbe_system_is_real(const spbe_system* sys) { return sys && sys->value.is_real() ? 1 : 0; }

void spbe_system_free(spbe_system* sys) { delete sys; }

spbe_status spbe_fixture_load(const char* id, spbe_system** sys, spbe_solution** candidate,
                              spbe_solution** exact) {
  return guarded([&] {
    need(id, "id");
    need(sys, "sys");
    spbe::Fixture fx = spbe::load_fixture(spbe::FixtureId::parse(id));
    std::optional<spbe::CandidateSolution> ex;
    if (fx.exact_solution) {
      ex = spbe::CandidateSolution::from_stacked(*fx.exact_solution, fx.system.n());
    }
    if (candidate) *candidate = fx.candidate ? new spbe_solution{*fx.candidate} : nullptr;
    if (exact) *exact = ex ? new spbe_solution{*ex} : nullptr;
    *sys = new spbe_system{std::move(fx.system)};
  });
}

spbe_status spbe_solution_load(const char* u_path, const char* p_path, spbe_solution** out) {
  return guarded([&] {
    need(u_path, "u_path");
    need(p_path, "p_path");
    need(out, "out");
    *out = new spbe_solution{spbe::CandidateSolution(spbe::read_matrix_market_vector(u_path),
                                                     spbe::read_matrix_market_vector(p_path))};
  });
}

spbe_status spbe_solution_save(const spbe_solution* sol, const char* u_path, const char* p_path) {
  return guarded([&] {
    need(sol, "sol");
    need(u_path, "u_path");
    need(p_path, "p_path");
    spbe::write_matrix_market_vector(u_path, sol->value.u());
    spbe::write_matrix_market_vector(p_path, sol->value.p());
  });
}

spbe_status spbe_solution_from_arrays(int64_t n, const double* u_re, const double* u_im,
                                      int64_t m, const double* p_re, const double* p_im,
                                      spbe_solution** out) {
  return guarded([&] {
    need(out, "out");
    if (n < 0 || m < 0) throw spbe::Error(spbe::ErrorCode::InvalidArgument, "negative length");
    need(u_re, "u_re");
    need(p_re, "p_re");
    auto vec = [](int64_t len, const double* re, const double* im) {
      spbe::RealVector a = Eigen::Map<const spbe::RealVector>(re, len);
      spbe::RealVector b = im ? spbe::RealVector(Eigen::Map<const spbe::RealVector>(im, len))
                              : spbe::RealVector::Zero(len);
      return spbe::ComplexVector(a, b);
    };
    *out = new spbe_solution{spbe::CandidateSolution(vec(n, u_re, u_im), vec(m, p_re, p_im))};
  });
}

void spbe_solution_free(spbe_solution* sol) { delete sol; }

spbe_status spbe_default_weights(const spbe_system* sys, int exclude_zero_rhs, spbe_weights* out) {
  return guarded([&] {
    need(sys, "sys");
    need(out, "out");
    *out = from_weights(spbe::default_relative_weights(
        sys->value, exclude_zero_rhs ? spbe::ZeroRhsPolicy::Exclude : spbe::ZeroRhsPolicy::Error));
  });
}

spbe_status spbe_uniform_weights(spbe_case structure, double value, spbe_weights* out) {
  return guarded([&] {
    need(out, "out");
    *out = from_weights(spbe::Weights::uniform(to_case(structure), value));
  });
}

spbe_status spbe_residual_norm(const spbe_system* sys, const spbe_solution* sol, double* out) {
  return guarded([&] {
    need(sys, "sys");
    need(sol, "sol");
    need(out, "out");
    *out = spbe::residuals(sys->value, sol->value).norm();
  });
}

spbe_status spbe_unstructured_be(const spbe_system* sys, const spbe_solution* sol, double* out) {
  return guarded([&] {
    need(sys, "sys");
    need(sol, "sol");
    need(out, "out");
    *out = spbe::rigal_gaches(sys->value, sol->value);
  });
}

spbe_status spbe_structured_be(const spbe_system* sys, const spbe_solution* sol,
                               const spbe_weights* weights, int preserve_sparsity,
                               spbe_path path, spbe_report** out) {
  return guarded([&] {
    need(sys, "sys");
    need(sol, "sol");
    need(weights, "weights");
    need(out, "out");
    const spbe::Weights w = to_weights(*weights);
    const bool real = path == SPBE_PATH_REAL ||
                      (path == SPBE_PATH_AUTO && sys->value.is_real() && sol->value.is_real());
    *out = new spbe_report{
        real ? spbe::reduce_real(sys->value, sol->value, w, preserve_sparsity != 0)
             : spbe::compute_structured_be(sys->value, sol->value, w, preserve_sparsity != 0)};
  });
}

spbe_status spbe_report_summary_get(const spbe_report* report, spbe_report_summary* out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    const spbe::BackwardErrorReport& r = report->value;
    out->xi = r.xi;
    out->sparsity_preserved = r.sparsity_preserved ? 1 : 0;
    out->real_path = r.real_path ? 1 : 0;
    out->rows = r.rows;
    out->columns = r.columns;
    out->diagnostics = from_diagnostics(r.diagnostics);
  });
}

spbe_status spbe_report_perturbation(const spbe_report* report, spbe_perturbation** out) {
  return guarded([&] {
    need(report, "report");
    need(out, "out");
    *out = new spbe_perturbation{report->value.perturbations};
  });
}

void spbe_report_free(spbe_report* report) { delete report; }

spbe_status spbe_perturbation_load(const char* dir, spbe_perturbation** out) {
  return guarded([&] {
    need(dir, "dir");
    need(out, "out");
    const fs::path d(dir);
    spbe::PerturbationSet p{spbe::read_matrix_market(d / "dE.mtx"),
                            spbe::read_matrix_market(d / "dF.mtx"),
                            spbe::read_matrix_market(d / "dH.mtx"),
                            spbe::read_matrix_market(d / "dG.mtx"),
                            spbe::read_matrix_market_vector(d / "dq.mtx"),
                            spbe::read_matrix_market_vector(d / "dr.mtx")};
    *out = new spbe_perturbation{std::move(p)};
  });
}

spbe_status spbe_perturbation_save(const spbe_perturbation* p, const char* dir) {
  return guarded([&] {
    need(p, "p");
    need(dir, "dir");
    const fs::path d(dir);
    fs::create_directories(d);
    const spbe::PerturbationSet& s = p->value;
    spbe::write_matrix_market(d / "dE.mtx", s.dE);
    spbe::write_matrix_market(d / "dF.mtx", s.dF, spbe::MmSymmetry::General);
    spbe::write_matrix_market(d / "dH.mtx", s.dH, spbe::MmSymmetry::General);
    spbe::write_matrix_market(d / "dG.mtx", s.dG);
    spbe::write_matrix_market_vector(d / "dq.mtx", s.dq);
    spbe::write_matrix_market_vector(d / "dr.mtx", s.dr);
  });
}

spbe_status spbe_perturbation_entry(const spbe_perturbation* p, char block, int64_t i, int64_t j,
                                    double* re, double* im) {
  return guarded([&] {
    need(p, "p");
    const spbe::PerturbationSet& set = p->value;
    double a = 0.0, b = 0.0;
    if (block == 'q' || block == 'r') {
      const spbe::ComplexVector& v = block == 'q' ? set.dq : set.dr;
      if (i < 0 || i >= v.size() || j != 0) {
        throw spbe::Error(spbe::ErrorCode::DimensionMismatch, "index out of range");
      }
      a = v.re()(i);
      b = v.im()(i);
    } else {
      const spbe::ComplexMatrix& x = block_matrix(set, block);
      if (i < 0 || i >= x.rows() || j < 0 || j >= x.cols()) {
        throw spbe::Error(spbe::ErrorCode::DimensionMismatch, "index out of range");
      }
      a = x.re()(i, j);
      b = x.im()(i, j);
    }
    if (re) *re = a;
    if (im) *im = b;
  });
}

spbe_status spbe_perturbation_set_entry(spbe_perturbation* p, char block, int64_t i, int64_t j,
                                        double re, double im) {
  return guarded([&] {
    need(p, "p");
    spbe::PerturbationSet& set = p->value;
    if (block == 'q' || block == 'r') {
      spbe::ComplexVector& v = block == 'q' ? set.dq : set.dr;
      if (i < 0 || i >= v.size() || j != 0) {
        throw spbe::Error(spbe::ErrorCode::DimensionMismatch, "index out of range");
      }
      spbe::RealVector a = v.re(), b = v.im();
      a(i) = re;
      b(i) = im;
      v = spbe::ComplexVector(a, b);
    } else {
      spbe::ComplexMatrix& x = block_matrix(set, block);
      if (i < 0 || i >= x.rows() || j < 0 || j >= x.cols()) {
        throw spbe::Error(spbe::ErrorCode::DimensionMismatch, "index out of range");
      }
      spbe::RealMatrix a = x.re(), b = x.im();
      a(i, j) = re;
      b(i, j) = im;
      x = spbe::ComplexMatrix(a, b);
    }
  });
}

void spbe_perturbation_free(spbe_perturbation* p) { delete p; }

spbe_status spbe_verify(const spbe_system* sys, const spbe_solution* sol,
                        const spbe_perturbation* p, const spbe_weights* weights,
                        int check_sparsity, spbe_diagnostics* out) {
  return guarded([&] {
    need(sys, "sys");
    need(sol, "sol");
    need(p, "p");
    need(out, "out");
    std::optional<spbe::Weights> w;
    if (weights) w = to_weights(*weights);
    std::optional<spbe::SparsityPattern> pattern;
    if (check_sparsity) pattern = spbe::derive_pattern(sys->value);
    *out = from_diagnostics(spbe::verify_perturbation(sys->value, sol->value, p->value,
                                                      pattern ? &*pattern : nullptr,
                                                      w ? &*w : nullptr));
  });
}

spbe_status spbe_gmres(const spbe_system* sys, double tol, int64_t maxit, spbe_trace** out) {
  return guarded([&] {
    need(sys, "sys");
    need(out, "out");
    if (maxit < 1) throw spbe::Error(spbe::ErrorCode::InvalidArgument, "maxit must be positive");
    *out = new spbe_trace{spbe::gmres(sys->value, tol, static_cast<std::size_t>(maxit))};
  });
}

spbe_status spbe_trace_info(const spbe_trace* trace, int64_t* iterations, int* converged,
                            double* final_relative_residual) {
  return guarded([&] {
    need(trace, "trace");
    if (iterations) *iterations = static_cast<int64_t>(trace->value.iterations);
    if (converged) *converged = trace->value.converged ? 1 : 0;
    if (final_relative_residual) *final_relative_residual = trace->value.final_relative_residual;
  });
}

int64_t spbe_trace_history_length(const spbe_trace* trace) {
  return trace ? static_cast<int64_t>(trace->value.relative_residual_history.size()) : 0;
}

spbe_status spbe_trace_history(const spbe_trace* trace, double* out, int64_t capacity) {
  return guarded([&] {
    need(trace, "trace");
    need(out, "out");
    const auto& h = trace->value.relative_residual_history;
    if (capacity < static_cast<int64_t>(h.size())) {
      throw spbe::Error(spbe::ErrorCode::InvalidArgument, "history buffer too small");
    }
    std::copy(h.begin(), h.end(), out);
  });
}

spbe_status spbe_trace_solution(const spbe_trace* trace, spbe_solution** out) {
  return guarded([&] {
    need(trace, "trace");
    need(out, "out");
    *out = new spbe_solution{trace->value.solution};
  });
}

void spbe_trace_free(spbe_trace* trace) { delete trace; }

spbe_status spbe_gepp(const spbe_system* sys, spbe_solution** out) {
  return guarded([&] {
    need(sys, "sys");
    need(out, "out");
    *out = new spbe_solution{spbe::gepp_solve(sys->value)};
  });
}

double spbe_default_threshold(double factor) {
  return factor > 0.0 ? spbe::default_stability_threshold(factor) : 0.0;
}

spbe_status spbe_classify_stability(const spbe_system* sys, const spbe_solution* sol,
                           const spbe_weights* weights, double threshold, spbe_stability* out) {
  return guarded([&] {
    need(sys, "sys");
    need(sol, "sol");
    need(weights, "weights");
    need(out, "out");
    const spbe::StabilityReport r =
        spbe::stability_report(sys->value, sol->value, to_weights(*weights), threshold);
    out->unstructured_be = r.unstructured_be;
    out->xi_sparse = r.structured_sparse.xi;
    out->xi_full = r.structured_full.xi;
    out->threshold = r.threshold;
    out->backward_stable = r.backward_stable ? 1 : 0;
    out->strongly_backward_stable = r.strongly_backward_stable ? 1 : 0;
  });
}

}  // extern "C"

/*
 * (C) Copyright 2026 spbe developers
 *
 * This software is licensed under the terms of the Apache Licence Version 2.0
 * which can be obtained at http://www.apache.org/licenses/LICENSE-2.0.
 */
/* C interface to the spbe backward-error library.
 *
 * Objects are opaque handles released with the matching *_free function.
 * Every fallible call returns a status; on failure the message is available
 * from spbe_last_error() on the calling thread. Output handles are written
 * only on success. */
#ifndef SPBE_SPBE_H
#define SPBE_SPBE_H

#include <stdint.h>

#if defined(_WIN32)
#define SPBE_API __declspec(dllexport)
#else
#define SPBE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum spbe_status {
  SPBE_OK = 0,
  SPBE_ERR_INVALID_ARGUMENT = 1,
  SPBE_ERR_DIMENSION = 2,
  SPBE_ERR_STRUCTURE = 3,
  SPBE_ERR_PARSE = 4,
  SPBE_ERR_IO = 5,
  SPBE_ERR_RANK_DEFICIENT = 6,
  SPBE_ERR_INFEASIBLE = 7,
  SPBE_ERR_SINGULAR = 8,
  SPBE_ERR_INTERNAL = 9
} spbe_status;

typedef enum spbe_case { SPBE_CASE_I = 1, SPBE_CASE_II = 2, SPBE_CASE_III = 3 } spbe_case;

typedef enum spbe_path {
  SPBE_PATH_AUTO = 0,    /* real reduction when system and candidate are real */
  SPBE_PATH_COMPLEX = 1,
  SPBE_PATH_REAL = 2
} spbe_path;

typedef struct spbe_system spbe_system;
typedef struct spbe_solution spbe_solution;
typedef struct spbe_report spbe_report;
typedef struct spbe_perturbation spbe_perturbation;
typedef struct spbe_trace spbe_trace;

/* Weight slots: 0..3 alpha1..alpha4, 4 beta1, 5 beta2. */
enum { SPBE_ALPHA1 = 0, SPBE_ALPHA2, SPBE_ALPHA3, SPBE_ALPHA4, SPBE_BETA1, SPBE_BETA2 };
typedef struct spbe_weights {
  double value[6];
  int excluded[6];
} spbe_weights;

typedef struct spbe_diagnostics {
  double perturbed_residual_norm;
  double residual_scale; /* ‖B‖_F‖x̂‖ + ‖f‖ */
  double hermitian_deviation_e;
  double hermitian_deviation_g;
  double shared_f_deviation;
  int64_t mask_violations;
  int64_t excluded_violations;
  int has_weighted_norm;
  double weighted_norm;
} spbe_diagnostics;

typedef struct spbe_report_summary {
  double xi;
  int sparsity_preserved;
  int real_path;
  int64_t rows;
  int64_t columns;
  spbe_diagnostics diagnostics;
} spbe_report_summary;

typedef struct spbe_stability {
  double unstructured_be;
  double xi_sparse;
  double xi_full;
  double threshold;
  int backward_stable;
  int strongly_backward_stable;
} spbe_stability;

SPBE_API const char* spbe_last_error(void);
SPBE_API const char* spbe_status_name(spbe_status status);

/* Systems. A directory holds E.mtx F.mtx H.mtx G.mtx q.mtx r.mtx; H.mtx is
 * optional in cases i and ii. */
SPBE_API spbe_status spbe_system_load(const char* dir, spbe_case structure, spbe_system** out);
SPBE_API spbe_status spbe_system_save(const spbe_system* sys, const char* dir);
SPBE_API spbe_status spbe_system_with_case(const spbe_system* sys, spbe_case structure,
                                           spbe_system** out);
SPBE_API spbe_status spbe_system_dims(const spbe_system* sys, int64_t* n, int64_t* m);
SPBE_API spbe_case spbe_system_case(const spbe_system* sys);
SPBE_API int spbe_system_is_real(const spbe_system* sys);
SPBE_API void spbe_system_free(spbe_system* sys);

/* Fixtures: "example1", "example3", "example4:t=5",
 * "random:seed=7,n=3,m=2,density=0.6,case=ii[,real]". `candidate` receives
 * the stored approximate solution or NULL; `exact` the exact solution or NULL.
 * Either pointer may be NULL when not wanted. */
SPBE_API spbe_status spbe_fixture_load(const char* id, spbe_system** sys,
                                       spbe_solution** candidate, spbe_solution** exact);

/* Candidate solutions. u and p are Matrix Market vectors. */
SPBE_API spbe_status spbe_solution_load(const char* u_path, const char* p_path,
                                        spbe_solution** out);
SPBE_API spbe_status spbe_solution_save(const spbe_solution* sol, const char* u_path,
                                        const char* p_path);
SPBE_API spbe_status spbe_solution_from_arrays(int64_t n, const double* u_re,
                                               const double* u_im, int64_t m,
                                               const double* p_re, const double* p_im,
                                               spbe_solution** out);
SPBE_API void spbe_solution_free(spbe_solution* sol);

/* Weights. */
SPBE_API spbe_status spbe_default_weights(const spbe_system* sys, int exclude_zero_rhs,
                                          spbe_weights* out);
SPBE_API spbe_status spbe_uniform_weights(spbe_case structure, double value, spbe_weights* out);

/* Backward errors. */
SPBE_API spbe_status spbe_residual_norm(const spbe_system* sys, const spbe_solution* sol,
                                        double* out);
SPBE_API spbe_status spbe_unstructured_be(const spbe_system* sys, const spbe_solution* sol,
                                          double* out);
SPBE_API spbe_status spbe_structured_be(const spbe_system* sys, const spbe_solution* sol,
                                        const spbe_weights* weights, int preserve_sparsity,
                                        spbe_path path, spbe_report** out);
SPBE_API spbe_status spbe_report_summary_get(const spbe_report* report,
                                             spbe_report_summary* out);
SPBE_API spbe_status spbe_report_perturbation(const spbe_report* report,
                                              spbe_perturbation** out);
SPBE_API void spbe_report_free(spbe_report* report);

/* Perturbations. A directory holds dE.mtx dF.mtx dH.mtx dG.mtx dq.mtx dr.mtx. */
SPBE_API spbe_status spbe_perturbation_load(const char* dir, spbe_perturbation** out);
SPBE_API spbe_status spbe_perturbation_save(const spbe_perturbation* p, const char* dir);
/* block is one of 'E','F','H','G','q','r'; vectors use j = 0. */
SPBE_API spbe_status spbe_perturbation_entry(const spbe_perturbation* p, char block, int64_t i,
                                             int64_t j, double* re, double* im);
SPBE_API spbe_status spbe_perturbation_set_entry(spbe_perturbation* p, char block, int64_t i,
                                                 int64_t j, double re, double im);
SPBE_API void spbe_perturbation_free(spbe_perturbation* p);

/* Diagnostics of a given perturbation. `weights` may be NULL (no weighted
 * norm); mask violations are counted when check_sparsity is nonzero. */
SPBE_API spbe_status spbe_verify(const spbe_system* sys, const spbe_solution* sol,
                                 const spbe_perturbation* p, const spbe_weights* weights,
                                 int check_sparsity, spbe_diagnostics* out);

/* Solvers. */
SPBE_API spbe_status spbe_gmres(const spbe_system* sys, double tol, int64_t maxit,
                                spbe_trace** out);
SPBE_API spbe_status spbe_trace_info(const spbe_trace* trace, int64_t* iterations,
                                     int* converged, double* final_relative_residual);
SPBE_API int64_t spbe_trace_history_length(const spbe_trace* trace);
SPBE_API spbe_status spbe_trace_history(const spbe_trace* trace, double* out, int64_t capacity);
SPBE_API spbe_status spbe_trace_solution(const spbe_trace* trace, spbe_solution** out);
SPBE_API void spbe_trace_free(spbe_trace* trace);
SPBE_API spbe_status spbe_gepp(const spbe_system* sys, spbe_solution** out);

SPBE_API double spbe_default_threshold(double factor);
SPBE_API spbe_status spbe_classify_stability(const spbe_system* sys, const spbe_solution* sol,
                                    const spbe_weights* weights, double threshold,
                                    spbe_stability* out);

#ifdef __cplusplus
}
#endif

#endif /* SPBE_SPBE_H */

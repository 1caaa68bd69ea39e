/*
 * obsolve C API.
 *
 * Every object is an opaque handle created by an obs_*_create style call and
 * released with the matching obs_*_free. Fallible calls return an obs_status;
 * on failure the output pointer is left untouched and obs_last_error() holds a
 * message for the calling thread. Accessors returning `const obs_matrix*`
 * hand out views owned by the parent handle; they stay valid until the parent
 * is freed.
 *
 * Matrices are row-major doubles. Vectors are single-column matrices.
 */
#ifndef OBSOLVE_H
#define OBSOLVE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(OBSOLVE_BUILDING_LIBRARY)
#    define OBS_API __declspec(dllexport)
#  else
#    define OBS_API __declspec(dllimport)
#  endif
#else
#  define OBS_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum obs_status {
  OBS_OK = 0,
  OBS_ERR_DIMENSION = 1,
  OBS_ERR_NOT_SQUARE = 2,
  OBS_ERR_NON_FINITE_ENTRY = 3,
  OBS_ERR_SINGULAR = 4,
  OBS_ERR_ZERO_MATRIX = 5,
  OBS_ERR_SIGMA_OUT_OF_RANGE = 6,
  OBS_ERR_PROPERTY_P = 7,
  OBS_ERR_NO_CERTIFICATE = 8,
  OBS_ERR_NON_FINITE = 9,
  OBS_ERR_ZERO_TRANSFER = 10,
  OBS_ERR_ILL_CONDITIONED = 11,
  OBS_ERR_INVALID_ARGUMENT = 12,
  OBS_ERR_PARSE = 13,
  OBS_ERR_IO = 14,
  OBS_ERR_NULL_ARGUMENT = 15,
  OBS_ERR_INTERNAL = 16
} obs_status;

OBS_API const char* obs_status_name(obs_status status);

/* Message of the last failed call on this thread, or "" after a success. */
OBS_API const char* obs_last_error(void);

/* ---------------------------------------------------------------- matrices */

typedef struct obs_matrix obs_matrix;

OBS_API obs_status obs_matrix_create(size_t rows, size_t cols,
                                     const double* row_major, obs_matrix** out);
OBS_API obs_status obs_matrix_clone(const obs_matrix* m, obs_matrix** out);
OBS_API void obs_matrix_free(obs_matrix* m);
OBS_API size_t obs_matrix_rows(const obs_matrix* m);
OBS_API size_t obs_matrix_cols(const obs_matrix* m);
OBS_API const double* obs_matrix_data(const obs_matrix* m);

/* Reads every block of a text matrix file. Free with obs_matrix_array_free. */
OBS_API obs_status obs_matrix_read_file(const char* path, obs_matrix*** out,
                                        size_t* count);
OBS_API void obs_matrix_array_free(obs_matrix** blocks, size_t count);
OBS_API obs_status obs_matrix_write_file(const char* path,
                                         const obs_matrix* const* blocks,
                                         size_t count);

/* 17 significant digits; needs a buffer of at least 32 bytes. */
OBS_API obs_status obs_format_double(double value, char* buf, size_t len);

/* ---------------------------------------------------------------- problems */

typedef struct obs_problem obs_problem;

typedef enum obs_rank_class {
  OBS_RANK_FULL_COLUMN = 0,
  OBS_RANK_FULL_ROW = 1,
  OBS_RANK_DEFICIENT = 2
} obs_rank_class;

OBS_API obs_status obs_problem_create(const obs_matrix* g, const obs_matrix* y_d,
                                      obs_problem** out);
/* Seeded random instance of the given rank class with a random target. */
OBS_API obs_status obs_problem_random(uint64_t seed, size_t p, size_t q,
                                      obs_rank_class rank_class,
                                      obs_problem** out);
/* Vector of `dim` entries uniform on [-1, 1) from the same generator. */
OBS_API obs_status obs_random_vector(uint64_t seed, size_t dim, obs_matrix** out);
OBS_API void obs_problem_free(obs_problem* problem);
OBS_API size_t obs_problem_rows(const obs_problem* problem);
OBS_API size_t obs_problem_cols(const obs_problem* problem);
OBS_API size_t obs_problem_rank(const obs_problem* problem);
OBS_API const obs_matrix* obs_problem_g(const obs_problem* problem);
OBS_API const obs_matrix* obs_problem_y_d(const obs_problem* problem);
/* 1 when rank([G Y_d]) == rank(G), else 0. */
OBS_API int obs_problem_solvable(const obs_problem* problem);
OBS_API obs_status obs_problem_projected_target(const obs_problem* problem,
                                                obs_matrix** out);

/* ---------------------------------------------------------------- gains */

typedef struct obs_gain obs_gain;

typedef enum obs_nilpotent_kind {
  OBS_NILPOTENT_ZERO = 0,
  OBS_NILPOTENT_SHIFT = 1
} obs_nilpotent_kind;

typedef enum obs_certificate {
  OBS_CERT_MONOTONE = 0,
  OBS_CERT_NILPOTENT = 1,
  OBS_CERT_SPECTRAL = 2,
  OBS_CERT_UNVERIFIED = 3
} obs_certificate;

/* F = sigma G^T. sigma <= 0 selects the default 1 / trace(G G^T). */
OBS_API obs_status obs_gain_sigma(const obs_problem* problem, double sigma,
                                  obs_gain** out);
OBS_API obs_status obs_gain_deadbeat(const obs_problem* problem,
                                     obs_nilpotent_kind kind, obs_gain** out);
OBS_API obs_status obs_gain_custom(const obs_problem* problem,
                                   const obs_matrix* f, obs_gain** out);
OBS_API void obs_gain_free(obs_gain* gain);
OBS_API const obs_matrix* obs_gain_matrix(const obs_gain* gain);
OBS_API int obs_gain_property_p(const obs_gain* gain);
/* `value` (optional) receives nu for OBS_CERT_NILPOTENT, rho for
 * OBS_CERT_SPECTRAL and 0 otherwise. */
OBS_API obs_certificate obs_gain_certificate(const obs_gain* gain,
                                             double* value);
/* 1 for a spectral estimate at or above 1 + 1e-3. */
OBS_API int obs_gain_diverging(const obs_gain* gain);

/* ---------------------------------------------------------------- solving */

typedef struct obs_solver_config {
  double epsilon;          /* step-difference stop, default 1e-5 */
  double residual_epsilon; /* residual probe, default 1e-3 */
  size_t max_iters;        /* default 1000000 */
  int record_trace;        /* default 0 */
} obs_solver_config;

OBS_API obs_solver_config obs_solver_config_default(void);

typedef struct obs_outcome obs_outcome;

/* u0 may be NULL for the zero initial input. */
OBS_API obs_status obs_solve(const obs_problem* problem, const obs_gain* gain,
                             const obs_solver_config* config,
                             const obs_matrix* u0, obs_outcome** out);
OBS_API void obs_outcome_free(obs_outcome* outcome);
OBS_API size_t obs_outcome_iterations(const obs_outcome* outcome);
OBS_API size_t obs_outcome_limit_reached_at(const obs_outcome* outcome);
OBS_API int obs_outcome_converged(const obs_outcome* outcome);
OBS_API int obs_outcome_solvable(const obs_outcome* outcome);
OBS_API int obs_outcome_residual_probe_passed(const obs_outcome* outcome);
OBS_API double obs_outcome_final_step_norm(const obs_outcome* outcome);
OBS_API double obs_outcome_final_residual(const obs_outcome* outcome);
OBS_API const obs_matrix* obs_outcome_u_inf(const obs_outcome* outcome);
OBS_API size_t obs_outcome_trace_length(const obs_outcome* outcome);
OBS_API obs_status obs_outcome_trace_row(const obs_outcome* outcome, size_t i,
                                         size_t* k, double* step_norm,
                                         double* residual_norm);

/* ---------------------------------------------------------------- solution set */

typedef struct obs_solution_set obs_solution_set;

OBS_API obs_status obs_solution_set_create(const obs_problem* problem,
                                           const obs_gain* gain,
                                           obs_solution_set** out);
OBS_API void obs_solution_set_free(obs_solution_set* set);
OBS_API const obs_matrix* obs_solution_set_particular(const obs_solution_set* set);
OBS_API const obs_matrix* obs_solution_set_null_projector(const obs_solution_set* set);
OBS_API size_t obs_solution_set_null_dim(const obs_solution_set* set);
/* q x (q - m) matrix of unit basis columns; NULL when the null space is {0}. */
OBS_API const obs_matrix* obs_solution_set_null_basis(const obs_solution_set* set);
OBS_API int obs_solution_set_is_least_squares(const obs_solution_set* set);
OBS_API obs_status obs_solution_set_limit_from(const obs_solution_set* set,
                                               const obs_matrix* u0,
                                               obs_matrix** out);

/* ---------------------------------------------------------------- oracle */

OBS_API obs_status obs_oracle_min_norm(const obs_matrix* g, const obs_matrix* y,
                                       obs_matrix** solution, double* residual);
OBS_API obs_status obs_oracle_residual_is_minimal(const obs_matrix* g,
                                                  const obs_matrix* y,
                                                  const obs_matrix* candidate,
                                                  size_t trials, uint64_t seed,
                                                  int* minimal);

/* ---------------------------------------------------------------- learning control */

typedef struct obs_plant obs_plant;
typedef struct obs_lifted obs_lifted;
typedef struct obs_ilc_run obs_ilc_run;

/* w: rows are w(0), w(1), ... (n_s columns); v: rows are v over the output
 * window (n_o columns). Either may be NULL for zero disturbances. */
OBS_API obs_status obs_plant_create(const obs_matrix* a, const obs_matrix* b,
                                    const obs_matrix* c, const obs_matrix* x0,
                                    size_t horizon, const obs_matrix* w,
                                    const obs_matrix* v, obs_plant** out);
OBS_API void obs_plant_free(obs_plant* plant);
OBS_API obs_status obs_plant_relative_degree(const obs_plant* plant, size_t* r);
OBS_API size_t obs_plant_inputs(const obs_plant* plant);
OBS_API size_t obs_plant_outputs(const obs_plant* plant);

/* reference: N x n_o, row t is y_d(r + t). */
OBS_API obs_status obs_lift(const obs_plant* plant, const obs_matrix* reference,
                            obs_lifted** out);
OBS_API void obs_lifted_free(obs_lifted* lifted);
OBS_API size_t obs_lifted_relative_degree(const obs_lifted* lifted);
OBS_API const obs_matrix* obs_lifted_g(const obs_lifted* lifted);
OBS_API const obs_matrix* obs_lifted_y_tilde(const obs_lifted* lifted);
OBS_API obs_status obs_lifted_problem(const obs_lifted* lifted, obs_problem** out);

OBS_API obs_status obs_ptype_gain(const obs_matrix* f0, size_t horizon,
                                  obs_matrix** out);
/* u: N x n_i; result: N x n_o over the output window. */
OBS_API obs_status obs_simulate(const obs_plant* plant, const obs_matrix* u,
                                obs_matrix** y);

/* u0: N x n_i. */
OBS_API obs_status obs_ilc_run_create(const obs_plant* plant,
                                      const obs_matrix* reference,
                                      const obs_matrix* f, const obs_matrix* u0,
                                      size_t iters, obs_ilc_run** out);
OBS_API void obs_ilc_run_free(obs_ilc_run* run);
OBS_API size_t obs_ilc_run_iterations(const obs_ilc_run* run);
OBS_API double obs_ilc_run_tracking_error(const obs_ilc_run* run, size_t k);
/* Input of trial k as an N x n_i matrix. */
OBS_API obs_status obs_ilc_run_input(const obs_ilc_run* run, size_t k,
                                     obs_matrix** out);

#ifdef __cplusplus
}
#endif

#endif /* OBSOLVE_H */

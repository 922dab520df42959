#ifndef BLOCKEIG_H
#define BLOCKEIG_H

/* C interface to the block eigensolver library. All functions return an
 * error code (BEIG_OK on success); beig_last_error() describes the most
 * recent failure on the calling thread. Handles are opaque and must be
 * released with the matching destroy function. */

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#define BEIG_API __declspec(dllexport)
#else
#define BEIG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

enum {
    BEIG_OK = 0,
    BEIG_ERR_INVALID = 1,  /* bad argument or configuration */
    BEIG_ERR_PARSE = 2,    /* matrix file rejected */
    BEIG_ERR_IO = 3,       /* file not readable or writable */
    BEIG_ERR_NUMERIC = 4,  /* factorization or rank failure */
    BEIG_ERR_INTERNAL = 5
};

enum {
    BEIG_SOLVER_SI = 0,
    BEIG_SOLVER_SD = 1,
    BEIG_SOLVER_LOBPCG = 2,
    BEIG_SOLVER_TRACEMIN = 3
};

enum {
    BEIG_STRATEGY_NONE = 0,
    BEIG_STRATEGY_FIX = 1,
    BEIG_STRATEGY_SLOPE = 2,
    BEIG_STRATEGY_SLOPEK = 3
};

enum { BEIG_PRECOND_IDENTITY = 0, BEIG_PRECOND_DIAGONAL = 1 };

enum { BEIG_EXPAND_XDROP = 0, BEIG_EXPAND_POWERED = 1, BEIG_EXPAND_RANDOM = 2 };

enum { BEIG_STATUS_CONVERGED = 0, BEIG_STATUS_MAX_ITERS = 1, BEIG_STATUS_STAGNATED = 2 };

enum { BEIG_EVENT_NONE = 0, BEIG_EVENT_SHRINK = 1, BEIG_EVENT_EXPAND = 2, BEIG_EVENT_LOCK = 3 };

typedef struct beig_matrix beig_matrix;
typedef struct beig_result beig_result;

/* Message for the last failing call on this thread; empty string if none. */
BEIG_API const char* beig_last_error(void);

/* ---- matrices ---- */

BEIG_API int beig_matrix_read(beig_matrix** out, const char* path);
/* Generator specs: "laplacian1d:N", "diag:v1,v2,...", "diag-geom:N,RATIO". */
BEIG_API int beig_matrix_gen(beig_matrix** out, const char* spec);
BEIG_API int beig_matrix_write(const beig_matrix* a, const char* path);
BEIG_API void beig_matrix_destroy(beig_matrix* a);

BEIG_API int beig_matrix_rows(const beig_matrix* a);
BEIG_API int64_t beig_matrix_nnz_lower(const beig_matrix* a);

/* Power-iteration estimate of ||A||_2; cached inside the handle, so calling
 * this once also makes later concurrent solves on the same handle cheap. */
BEIG_API int beig_matrix_norm_est(const beig_matrix* a, double* out);

/* Smallest eigenvalue via a dense decomposition; intended for pre-shift
 * checks on matrices of modest size. */
BEIG_API int beig_matrix_lambda_min(const beig_matrix* a, double* out);

/* A - 1.05*lambda1*I when lambda1 <= 0, otherwise a plain copy. */
BEIG_API int beig_matrix_spd_shift(beig_matrix** out, const beig_matrix* a, double lambda1);

/* ---- configuration ---- */

typedef struct beig_solver_config {
    int n_ev;
    int n_ex;        /* 0: solver default (2*n_ev, or 1.5*n_ev for LOBPCG) */
    int n_es;        /* 0: default min(n_ev + 5, n_ex - 1) */
    double tol;
    int max_iters;
    double shift;    /* zeta for the shift-and-invert factorization */
    int cg_iters;    /* inner CG steps per column (TraceMIN) */
    int precond;     /* BEIG_PRECOND_* */
    int expand_mode; /* BEIG_EXPAND_* */
    uint64_t seed;
} beig_solver_config;

typedef struct beig_strategy_config {
    int kind; /* BEIG_STRATEGY_* */
    int j_e;
    int j_s;
    double mu;
    int j_p;
    int j_warm;
    double r_warm;
} beig_strategy_config;

BEIG_API void beig_solver_config_default(beig_solver_config* cfg);
BEIG_API void beig_strategy_config_default(beig_strategy_config* cfg);

/* ---- solving ---- */

/* x0: optional column-major n-by-x0_cols starting block (NULL for random;
 * x0_cols must then be 0). The handle written to *out owns the solution and
 * the per-iteration history. */
BEIG_API int beig_solve(beig_result** out, const beig_matrix* a, int solver,
                        const beig_solver_config* cfg, const beig_strategy_config* strategy,
                        const double* x0, int x0_cols);
BEIG_API void beig_result_destroy(beig_result* r);

BEIG_API int beig_result_status(const beig_result* r);
BEIG_API int beig_result_iterations(const beig_result* r);
BEIG_API int beig_result_nev(const beig_result* r);
BEIG_API int beig_result_rows(const beig_result* r);
/* Copies min(cap, nev) eigenvalues (ascending). Returns the count copied. */
BEIG_API int beig_result_values(const beig_result* r, double* out, int cap);
/* Copies the n-by-nev eigenvector block column-major; cap is the capacity of
 * out in doubles. Returns the number of doubles copied. */
BEIG_API int64_t beig_result_vectors(const beig_result* r, double* out, int64_t cap);

typedef struct beig_iter_record {
    int iteration;
    double r_overall;
    int n_now;
    int event; /* BEIG_EVENT_* */
    int lock_count;
    int64_t spmv_cols;
    int64_t solve_cols;
    int64_t ortho_flops;
    int rr_dim;
} beig_iter_record;

BEIG_API int beig_result_history_len(const beig_result* r);
BEIG_API int beig_result_history(const beig_result* r, beig_iter_record* out, int cap);

typedef struct beig_work_summary {
    int64_t spmv_cols;
    int64_t solve_cols;
    int64_t ortho_flops;
    int64_t rr_flops;
    double combined; /* (spmv+solve)*2*nnz + ortho + rr */
} beig_work_summary;

BEIG_API int beig_result_work(const beig_result* r, beig_work_summary* out);

/* ---- analysis checks ---- */

typedef struct beig_example3x3 {
    double x1[6]; /* column-major 3x2 */
    double x2[6];
    double rho_x1;
    double rho_power;
    double rho_expanded;
    double asymptotic;
} beig_example3x3;

BEIG_API int beig_theory_example3x3(beig_example3x3* out);

typedef struct beig_suite_outcome {
    int trials;
    int violations;
    int inconclusive;
} beig_suite_outcome;

/* failure_json receives a replay record for the first violating instance
 * (untouched when there is none); pass NULL/0 to skip. */
BEIG_API int beig_theory_rate_suite(beig_suite_outcome* out, int trials, uint64_t seed,
                                    char* failure_json, size_t cap);
BEIG_API int beig_theory_decomp_suite(beig_suite_outcome* out, int trials, uint64_t seed,
                                      char* failure_json, size_t cap);
BEIG_API int beig_theory_perturb_suite(beig_suite_outcome* out, int trials, uint64_t seed,
                                       char* failure_json, size_t cap);

typedef struct beig_scaling_outcome {
    double floor_rate;
    double rate_at_zero;
    double excess_at_zero;
    double eps[3];
    double excess[3];
    double slope;
    double k_fit;
    int zero_limit_ok;
    int slope_ok;
} beig_scaling_outcome;

BEIG_API int beig_theory_scaling(beig_scaling_outcome* out, uint64_t seed);

#ifdef __cplusplus
}
#endif

#endif /* BLOCKEIG_H */

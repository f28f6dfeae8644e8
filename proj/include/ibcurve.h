/* ---------------------------------------------------------------------------
 * ibcurve.h
 *
 * C interface to the ibcurve library: finite joint distributions p(x, y),
 * stochastic encoders q(t|x), information-bottleneck style solvers, the
 * closed-form constructions for deterministic joints, and numerical
 * verification of the perturbation bounds.
 *
 * Every fallible call returns an ibc_status; on failure the thread-local
 * message from ibc_last_error() describes what went wrong.  Objects are
 * opaque handles created by ibc_*_load/run/from_* calls and released with
 * the matching ibc_*_free.  Strings returned through const char* out
 * parameters point into the owning object and stay valid until it is freed.
 * ------------------------------------------------------------------------- */
#ifndef IBCURVE_H
#define IBCURVE_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum ibc_status {
  IBC_OK = 0,
  IBC_ERR_INVALID_INPUT = 1, /* bad argument or malformed distribution */
  IBC_ERR_PARSE = 2,         /* unreadable CSV or JSON content */
  IBC_ERR_RESOURCE_LIMIT = 3, /* an enumeration guard would be exceeded */
  IBC_ERR_IO = 4,            /* file could not be opened, read, or written */
  IBC_ERR_UNKNOWN = 5
} ibc_status;

typedef enum ibc_objective {
  IBC_OBJECTIVE_IB_LAGRANGIAN = 0, /* I(Y;T) - beta I(X;T)   */
  IBC_OBJECTIVE_SQUARED_IB = 1,    /* I(Y;T) - beta I(X;T)^2 */
  IBC_OBJECTIVE_DIB = 2,           /* I(Y;T) - beta H(T)     */
  IBC_OBJECTIVE_SQUARED_DIB = 3    /* I(Y;T) - beta H(T)^2   */
} ibc_objective;

typedef struct ibc_joint ibc_joint;
typedef struct ibc_encoder ibc_encoder;
typedef struct ibc_scan ibc_scan;
typedef struct ibc_table ibc_table;
typedef struct ibc_bounds ibc_bounds;

const char* ibc_version(void);

/* Message for the most recent failure on the calling thread. */
const char* ibc_last_error(void);

/* --- joints ------------------------------------------------------------- */

/* Reads CSV (labeled grid) or JSON depending on the file extension. */
ibc_status ibc_joint_load(const char* path, ibc_joint** out);
ibc_status ibc_joint_save(const ibc_joint* joint, const char* path);
ibc_status ibc_joint_from_csv(const char* text, ibc_joint** out);
ibc_status ibc_joint_from_json(const char* text, ibc_joint** out);

/* Dense row-major p with num_x rows and num_y columns. */
ibc_status ibc_joint_from_dense(const double* p, int num_x, int num_y,
                                ibc_joint** out);

/* Deterministic joint p(x, class_of[x]) = p_x[x].  Pass num_classes = 0 to
 * infer the class count as max(class_of) + 1. */
ibc_status ibc_joint_deterministic(const int* class_of, const double* p_x,
                                   int num_x, int num_classes,
                                   ibc_joint** out);

int ibc_joint_num_x(const ibc_joint* joint);
int ibc_joint_num_y(const ibc_joint* joint);
ibc_status ibc_joint_entry(const ibc_joint* joint, int x, int y, double* out);
int ibc_joint_is_deterministic(const ibc_joint* joint);

/* Writes the 16-hex-character content fingerprint; buf_len must be >= 17. */
ibc_status ibc_joint_fingerprint(const ibc_joint* joint, char* buf,
                                 size_t buf_len);
void ibc_joint_free(ibc_joint* joint);

/* --- encoders ------------------------------------------------------------ */

/* Dense row-major q(t|x) with num_in rows and num_t columns. */
ibc_status ibc_encoder_from_dense(const double* q, int num_in, int num_t,
                                  ibc_encoder** out);

/* T = X. */
ibc_status ibc_encoder_identity(const ibc_joint* joint, ibc_encoder** out);

/* T = f(X) for a deterministic joint with class map f. */
ibc_status ibc_encoder_collapse(const ibc_joint* joint, ibc_encoder** out);

/* Erasure encoder: T = f(X) with probability alpha, an extra erased symbol
 * otherwise.  Requires a deterministic joint and alpha in [0, 1]. */
ibc_status ibc_encoder_erasure(const ibc_joint* joint, double alpha,
                               ibc_encoder** out);

int ibc_encoder_num_in(const ibc_encoder* encoder);
int ibc_encoder_num_t(const ibc_encoder* encoder);
ibc_status ibc_encoder_entry(const ibc_encoder* encoder, int row, int t,
                             double* out);
void ibc_encoder_free(ibc_encoder* encoder);

/* --- evaluation ----------------------------------------------------------- */

typedef struct ibc_report {
  double i_xt; /* I(X;T), nats */
  double i_yt; /* I(Y;T), nats */
  double h_t;  /* H(T), nats */
  double h_y;  /* H(Y), nats */
} ibc_report;

ibc_status ibc_evaluate(const ibc_joint* joint, const ibc_encoder* encoder,
                        ibc_report* out);

/* Evaluates a cascade; stage k's input alphabet is stage k-1's output.
 * out_reports must hold num_stages entries. */
ibc_status ibc_chain_evaluate(const ibc_joint* joint,
                              const ibc_encoder* const* stages,
                              int num_stages, ibc_report* out_reports);

/* Error of the plug-in classifier reading the final stage of the cascade. */
ibc_status ibc_prediction_error(const ibc_joint* joint,
                                const ibc_encoder* const* stages,
                                int num_stages, double* out);

/* --- solving -------------------------------------------------------------- */

typedef struct ibc_solver_config {
  double beta;       /* trade-off weight, >= 0 */
  int t_cardinality; /* 0 picks |X| + 1 */
  int max_iters;
  double tol;        /* objective change declaring convergence */
  int restarts;      /* restart 0 is canonical, the rest randomized */
  uint64_t seed;
  double damping;    /* (0, 1]; smoothing for the squared objectives */
} ibc_solver_config;

void ibc_solver_config_init(ibc_solver_config* cfg);

ibc_status ibc_solve(const ibc_joint* joint, ibc_objective objective,
                     const ibc_solver_config* cfg, ibc_encoder** out_encoder,
                     ibc_report* out_report, double* out_objective,
                     int* out_iterations, int* out_converged,
                     int* out_restart_index);

/* --- beta scans ------------------------------------------------------------ */

/* Solves every beta in the strictly increasing grid.  Per-point failures are
 * recorded in the scan instead of failing the call; results are independent
 * of the worker count. */
ibc_status ibc_scan_run(const ibc_joint* joint, ibc_objective objective,
                        const double* betas, int num_betas,
                        const ibc_solver_config* cfg, int workers,
                        ibc_scan** out);

int ibc_scan_num_points(const ibc_scan* scan);
int ibc_scan_failed_count(const ibc_scan* scan);

/* Reads one scan point.  Every out pointer may be NULL.  *out_ok tells
 * whether the point solved; failed points only carry beta. */
ibc_status ibc_scan_point(const ibc_scan* scan, int index, double* out_beta,
                          ibc_report* out_report, double* out_objective,
                          int* out_iterations, int* out_converged,
                          int* out_restart_index, int* out_ok);

ibc_status ibc_scan_write_csv(const ibc_scan* scan, const char* path);
ibc_status ibc_scan_write_json(const ibc_scan* scan, const char* path,
                               int embed_encoders);
void ibc_scan_free(ibc_scan* scan);

/* --- closed-form tables ----------------------------------------------------- */

/* Erasure-family sweep at n evenly spaced alphas: alpha, i_xt, i_yt, h_t. */
ibc_status ibc_table_talpha(const ibc_joint* joint, int n, ibc_table** out);

/* Step envelope of the deterministic bottleneck: h_t, i_yt. */
ibc_status ibc_table_dib_envelope(const ibc_joint* joint, int max_classes,
                                  ibc_table** out);

/* Hard clusterings of the classes: h_t, i_xt, i_yt per partition. */
ibc_status ibc_table_hard_front(const ibc_joint* joint, int max_classes,
                                ibc_table** out);

/* Exhaustively searched trade-off front: i_xt, i_yt. */
ibc_status ibc_table_brute_force(const ibc_joint* joint, int t_cardinality,
                                 int grid_per_row, ibc_table** out);

int ibc_table_rows(const ibc_table* table);
int ibc_table_cols(const ibc_table* table);
const char* ibc_table_column_name(const ibc_table* table, int col);
ibc_status ibc_table_cell(const ibc_table* table, int row, int col,
                          double* out);
ibc_status ibc_table_write_csv(const ibc_table* table, const char* path);
void ibc_table_free(ibc_table* table);

/* --- perturbation-bound verification ----------------------------------------- */

/* Closed-form bounds; epsilon in (0, 1/2], y_card >= 2. */
ibc_status ibc_bound_cond_entropy(double epsilon, int y_card, double* out);
ibc_status ibc_bound_mi_diff(double epsilon, int y_card, double* out);
ibc_status ibc_gamma_bound(double epsilon, int y_card, double* out);

/* Samples `trials` perturbations of the deterministic base per epsilon and
 * checks the selected bound families on each.  theorems is a list drawn
 * from {"a1","a2","a3","a4","a5","issue3"}; pass num_theorems = 0 for all.
 * betas (for the localization checks) may be NULL for the default
 * {0.25, 0.5, 0.75}; solver may be NULL for default solver settings. */
ibc_status ibc_verify_run(const ibc_joint* base, const char* const* theorems,
                          int num_theorems, const double* epsilons,
                          int num_epsilons, int trials, uint64_t seed,
                          const double* betas, int num_betas,
                          const ibc_solver_config* solver, ibc_bounds** out);

int ibc_bounds_num_rows(const ibc_bounds* bounds);
int ibc_bounds_all_hold(const ibc_bounds* bounds);
int ibc_bounds_inconclusive_count(const ibc_bounds* bounds);

/* Reads one report row.  Every out pointer may be NULL; returned strings
 * live as long as the bounds object. */
ibc_status ibc_bounds_row(const ibc_bounds* bounds, int index,
                          const char** out_theorem, double* out_eps_target,
                          double* out_eps_actual, int* out_y_card,
                          double* out_measured, double* out_bound,
                          double* out_margin, int* out_holds,
                          const char** out_notes);

ibc_status ibc_bounds_write_csv(const ibc_bounds* bounds, const char* path);
void ibc_bounds_free(ibc_bounds* bounds);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* IBCURVE_H */

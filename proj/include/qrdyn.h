/* qrdyn - planar quasiregular dynamics toolkit, C API.
 *
 * All functions return a qrdyn_status; results travel through out
 * parameters. Heap-backed results are returned as opaque handles with
 * explicit _free functions. Handles are not thread-safe individually, but
 * distinct handles may be used from distinct threads. On any failure the
 * thread-local message of qrdyn_last_error() describes the cause.
 */
#ifndef QRDYN_H
#define QRDYN_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum qrdyn_status {
  QRDYN_OK = 0,
  QRDYN_ERR_ARGUMENT = 1,  /* invalid argument or precondition violation */
  QRDYN_ERR_DOMAIN = 2,    /* input outside the map's mathematical domain */
  QRDYN_ERR_COMPUTE = 3,   /* numerical failure (overflow, degeneracy) */
  QRDYN_ERR_IO = 4         /* file could not be written or read */
} qrdyn_status;

const char* qrdyn_status_str(qrdyn_status s);
const char* qrdyn_last_error(void);

typedef struct qrdyn_complex {
  double re;
  double im;
} qrdyn_complex;

/* A point of the extended plane. */
typedef struct qrdyn_extended {
  double re;
  double im;
  int at_infinity;
} qrdyn_extended;

typedef struct qrdyn_cyl3 {
  double r;      /* cylindrical radius >= 0 */
  double theta;  /* angle in (-pi, pi] */
  double x3;     /* axial coordinate */
} qrdyn_cyl3;

typedef enum qrdyn_map_kind {
  QRDYN_MAP_G = 0,
  QRDYN_MAP_L = 1,
  QRDYN_MAP_L_INV = 2,
  QRDYN_MAP_H = 3,
  QRDYN_MAP_F = 4,
  QRDYN_MAP_CYL3D = 5
} qrdyn_map_kind;

typedef struct qrdyn_map_spec {
  int kind;       /* qrdyn_map_kind */
  double c;       /* rotation amplitude, 0 <= c < pi/4 */
  double d;       /* perturbation amplitude, > 0 */
  double lambda;  /* 3D stretch exponent, > 0 */
} qrdyn_map_spec;

/* Defaults: c = 0.5, d = 1e-3, lambda = 1. */
qrdyn_map_spec qrdyn_map_spec_default(qrdyn_map_kind kind);

typedef struct qrdyn_escape_policy {
  double escape_radius;  /* > 10 */
  long budget;           /* >= 1 */
  int persistence;       /* >= 1 */
} qrdyn_escape_policy;

/* Defaults: radius 1e3, budget 1e4, persistence 10. */
qrdyn_escape_policy qrdyn_escape_policy_default(void);

typedef struct qrdyn_window {
  double xmin, xmax, ymin, ymax;
} qrdyn_window;

typedef enum qrdyn_orbit_class {
  QRDYN_ORBIT_ESCAPING = 0,
  QRDYN_ORBIT_RETURNING = 1,
  QRDYN_ORBIT_FIXED = 2,
  QRDYN_ORBIT_UNDETERMINED = 3
} qrdyn_orbit_class;

const char* qrdyn_orbit_class_str(qrdyn_orbit_class c);

/* ---- map evaluation ---------------------------------------------------- */

qrdyn_status qrdyn_eval_a(double r, double* out);
qrdyn_status qrdyn_eval_g(qrdyn_complex z, double c, qrdyn_complex* out);
qrdyn_status qrdyn_eval_L(qrdyn_extended z, qrdyn_extended* out);
qrdyn_status qrdyn_eval_L_inv(qrdyn_extended w, qrdyn_extended* out);
qrdyn_status qrdyn_eval_h(qrdyn_complex z, double c, qrdyn_complex* out);
qrdyn_status qrdyn_eval_phi(qrdyn_complex z, qrdyn_complex* out);
/* overflowed is set when the magnitude saturated instead of overflowing. */
qrdyn_status qrdyn_eval_f(qrdyn_complex z, const qrdyn_map_spec* spec,
                          qrdyn_complex* out, int* overflowed);
qrdyn_status qrdyn_eval_map(const qrdyn_map_spec* spec, qrdyn_complex z,
                            qrdyn_complex* out, int* overflowed);
qrdyn_status qrdyn_eval_f3d(qrdyn_cyl3 p, double lambda, qrdyn_cyl3* out);

/* Radii of the annulus A_n, n >= 2. */
qrdyn_status qrdyn_annulus_bounds(int n, double* rin, double* rout);

/* ---- orbits ------------------------------------------------------------ */

typedef struct qrdyn_orbit qrdyn_orbit;

qrdyn_status qrdyn_orbit_run(const qrdyn_map_spec* spec, qrdyn_complex z0,
                             const qrdyn_escape_policy* policy, qrdyn_orbit** out);
void qrdyn_orbit_free(qrdyn_orbit* orbit);

qrdyn_orbit_class qrdyn_orbit_classification(const qrdyn_orbit* orbit);
long qrdyn_orbit_iterations(const qrdyn_orbit* orbit);
long qrdyn_orbit_returns(const qrdyn_orbit* orbit);
long qrdyn_orbit_sign_flip_index(const qrdyn_orbit* orbit);  /* -1 if none */
int qrdyn_orbit_saturated(const qrdyn_orbit* orbit);
size_t qrdyn_orbit_point_count(const qrdyn_orbit* orbit);
/* Stored iterate i together with its iteration index. */
qrdyn_status qrdyn_orbit_point(const qrdyn_orbit* orbit, size_t i,
                               qrdyn_complex* z, long* iteration);
/* Trace CSV: k,re,im,modulus with the start point as row k = 0. */
qrdyn_status qrdyn_orbit_write_csv(const qrdyn_orbit* orbit, const char* path);

/* Batch CSV over a set of start points:
 * start_re,start_im,classification,iterations,returns,sign_flip_index. */
qrdyn_status qrdyn_orbit_batch_csv(const qrdyn_map_spec* spec,
                                   const qrdyn_complex* starts, size_t count,
                                   const qrdyn_escape_policy* policy,
                                   const char* path);

/* Rotation inequality margins for one application of g; see the library
 * documentation for the two bounds. */
qrdyn_status qrdyn_verify_rotation(qrdyn_complex z, double c, int* pass,
                                   double* lower_margin, double* upper_margin,
                                   int* annulus);

/* Smallest k <= k_max with Re g^k(z) <= 0; found = 0 when the budget ran
 * out (k_out is then -1). */
qrdyn_status qrdyn_find_sign_flip(qrdyn_complex z, double c, long k_max,
                                  long* k_out, int* found);

qrdyn_status qrdyn_detect_returns(qrdyn_complex z0, double c, long budget,
                                  long* returns);

qrdyn_status qrdyn_integer_ray_check(long n, long steps, const qrdyn_map_spec* spec,
                                     double* max_deviation);

/* ---- grids -------------------------------------------------------------- */

/* Fills `out` with `count` deterministic points of the annulus A_n. */
qrdyn_status qrdyn_sample_annulus(int n, long count, uint64_t seed,
                                  int halfplane_re_positive, qrdyn_complex* out);

typedef struct qrdyn_grid qrdyn_grid;

qrdyn_status qrdyn_grid_compute(const qrdyn_map_spec* spec, qrdyn_window window,
                                long nx, long ny, const qrdyn_escape_policy* policy,
                                int workers, qrdyn_grid** out);
void qrdyn_grid_free(qrdyn_grid* grid);

long qrdyn_grid_nx(const qrdyn_grid* grid);
long qrdyn_grid_ny(const qrdyn_grid* grid);
qrdyn_status qrdyn_grid_cell(const qrdyn_grid* grid, long ix, long iy,
                             int* classification, int* escape_iteration);
qrdyn_status qrdyn_grid_write_pgm(const qrdyn_grid* grid, const char* path);
qrdyn_status qrdyn_grid_write_ppm(const qrdyn_grid* grid, const char* path);

/* True when every 4-connected path from the cell of `start` to the window
 * boundary crosses a cell of `blocking` class. */
qrdyn_status qrdyn_grid_separated(const qrdyn_grid* grid, qrdyn_complex start,
                                  qrdyn_orbit_class blocking, int* separated);

typedef struct qrdyn_components qrdyn_components;

qrdyn_status qrdyn_grid_components(const qrdyn_grid* grid, qrdyn_orbit_class which,
                                   int dilate, qrdyn_components** out);
void qrdyn_components_free(qrdyn_components* set);

size_t qrdyn_components_count(const qrdyn_components* set);
qrdyn_status qrdyn_components_info(const qrdyn_components* set, size_t i,
                                   long* cell_count, qrdyn_window* bounding_box,
                                   int* touches_window_boundary);
/* Component label containing the cell of z, or -1. */
qrdyn_status qrdyn_components_locate(const qrdyn_components* set,
                                     const qrdyn_grid* grid, qrdyn_complex z,
                                     int* label);
qrdyn_status qrdyn_components_write_csv(const qrdyn_components* set, const char* path);

qrdyn_status qrdyn_max_modulus(const qrdyn_map_spec* spec, double r, long samples,
                               double* out);

typedef struct qrdyn_growth qrdyn_growth;

qrdyn_status qrdyn_growth_curve(const qrdyn_map_spec* spec, const double* radii,
                                size_t count, long samples, qrdyn_growth** out);
void qrdyn_growth_free(qrdyn_growth* curve);
qrdyn_status qrdyn_growth_point(const qrdyn_growth* curve, size_t i, double* r,
                                double* m_value, double* ratio);
qrdyn_status qrdyn_growth_write_csv(const qrdyn_growth* curve, const char* path);

typedef struct qrdyn_coverage qrdyn_coverage;

/* tol <= 0 selects the default 1e-6 * max(1, L). */
qrdyn_status qrdyn_circle_coverage(const qrdyn_map_spec* spec, double R, double rho,
                                   double L, long targets, double tol,
                                   qrdyn_coverage** out);
void qrdyn_coverage_free(qrdyn_coverage* coverage);
double qrdyn_coverage_fraction(const qrdyn_coverage* coverage);
long qrdyn_coverage_hits(const qrdyn_coverage* coverage);
qrdyn_status qrdyn_coverage_witness(const qrdyn_coverage* coverage, size_t i,
                                    qrdyn_complex* target, qrdyn_complex* preimage,
                                    double* residual, int* found);
qrdyn_status qrdyn_coverage_write_csv(const qrdyn_coverage* coverage, const char* path);

/* ---- dilatation ---------------------------------------------------------- */

/* Planar Jacobian by central differences, row-major 2x2. */
qrdyn_status qrdyn_jacobian_fd(const qrdyn_map_spec* spec, qrdyn_complex z,
                               double step, double jac[4], int* reliable);
qrdyn_status qrdyn_beltrami(const qrdyn_map_spec* spec, qrdyn_complex z, double step,
                            double* mu_abs, double* k, int* reliable);
/* Singular values (descending) and K = max(inner, outer) of the 3D map. */
qrdyn_status qrdyn_dilatation_3d(double lambda, qrdyn_cyl3 p, double step,
                                 double singular_values[3], double* k, int* reliable);

typedef struct qrdyn_scan qrdyn_scan;

qrdyn_status qrdyn_scan_dilatation(const qrdyn_map_spec* spec, qrdyn_window region,
                                   long samples, double step, int workers,
                                   qrdyn_scan** out);
void qrdyn_scan_free(qrdyn_scan* scan);
double qrdyn_scan_max_k(const qrdyn_scan* scan);
long qrdyn_scan_evaluated(const qrdyn_scan* scan);
long qrdyn_scan_unreliable(const qrdyn_scan* scan);
long qrdyn_scan_excluded(const qrdyn_scan* scan);
qrdyn_status qrdyn_scan_write_csv(const qrdyn_scan* scan, const char* path);

/* ---- verification suite -------------------------------------------------- */

typedef struct qrdyn_verify qrdyn_verify;

/* suite: "maps", "orbits", "grids", or "all". */
qrdyn_status qrdyn_verify_run(const char* suite, const qrdyn_map_spec* spec,
                              uint64_t seed, int quick, int workers,
                              qrdyn_verify** out);
void qrdyn_verify_free(qrdyn_verify* report);
size_t qrdyn_verify_count(const qrdyn_verify* report);
qrdyn_status qrdyn_verify_item(const qrdyn_verify* report, size_t i,
                               const char** name, int* pass, const char** detail);
int qrdyn_verify_all_passed(const qrdyn_verify* report);

/* ---- misc ---------------------------------------------------------------- */

/* FNV-1a 64-bit digest of a file's bytes. */
qrdyn_status qrdyn_file_digest(const char* path, uint64_t* digest);

#ifdef __cplusplus
}
#endif

#endif /* QRDYN_H */

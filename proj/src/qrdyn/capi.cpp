#include "qrdyn.h"

#include <cstring>
#include <string>

#include "qrdyn/dilatation.hpp"
#include "qrdyn/grids.hpp"
#include "qrdyn/io.hpp"
#include "qrdyn/maps.hpp"
#include "qrdyn/orbits.hpp"
#include "qrdyn/verify.hpp"

using namespace qrdyn;

namespace {

thread_local std::string g_last_error;

qrdyn_status fail(qrdyn_status s, const char* what) {
  g_last_error = what ? what : "";
  return s;
}

// Runs the body and maps C++ exceptions onto status codes.
template <typename Fn>
qrdyn_status guarded(Fn&& fn) {
  try {
    fn();
    return QRDYN_OK;
  } catch (const std::domain_error& e) {
    return fail(QRDYN_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(QRDYN_ERR_ARGUMENT, e.what());
  } catch (const OrientationError& e) {
    return fail(QRDYN_ERR_COMPUTE, e.what());
  } catch (const std::exception& e) {
    return fail(QRDYN_ERR_COMPUTE, e.what());
  }
}

template <typename Fn>
qrdyn_status guarded_io(Fn&& fn) {
  try {
    fn();
    return QRDYN_OK;
  } catch (const std::domain_error& e) {
    return fail(QRDYN_ERR_DOMAIN, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(QRDYN_ERR_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(QRDYN_ERR_IO, e.what());
  }
}

Complex to_cpp(qrdyn_complex z) { return Complex(z.re, z.im); }
qrdyn_complex to_c(Complex z) { return {z.real(), z.imag()}; }

Extended to_cpp(qrdyn_extended z) {
  return z.at_infinity ? Extended::at_infinity() : Extended::finite(Complex(z.re, z.im));
}
qrdyn_extended to_c(const Extended& e) {
  if (e.infinite) return {0.0, 0.0, 1};
  return {e.value.real(), e.value.imag(), 0};
}

CylPoint3 to_cpp(qrdyn_cyl3 p) { return {p.r, p.theta, p.x3}; }
qrdyn_cyl3 to_c(const CylPoint3& p) { return {p.r, p.theta, p.x3}; }

MapSpec to_cpp(const qrdyn_map_spec* spec) {
  if (!spec) throw std::invalid_argument("null map spec");
  if (spec->kind < 0 || spec->kind > 5) throw std::invalid_argument("unknown map kind");
  MapSpec s;
  s.kind = static_cast<MapKind>(spec->kind);
  s.params = MapParams{spec->c, spec->d, spec->lambda};
  return s;
}

EscapePolicy to_cpp(const qrdyn_escape_policy* p) {
  if (!p) throw std::invalid_argument("null escape policy");
  return EscapePolicy{p->escape_radius, p->budget, p->persistence};
}

Window to_cpp(qrdyn_window w) { return Window{w.xmin, w.xmax, w.ymin, w.ymax}; }

template <typename T>
void require(T* ptr, const char* what) {
  if (!ptr) throw std::invalid_argument(what);
}

std::string orbit_trace_csv(const OrbitRecord& rec) {
  std::string out = csv_row({"k", "re", "im", "modulus"});
  out += csv_row({"0", fmt_double(rec.start.real()), fmt_double(rec.start.imag()),
                  fmt_double(std::abs(rec.start))});
  for (size_t i = 0; i < rec.points.size(); ++i) {
    out += csv_row({std::to_string(rec.point_index[i]), fmt_double(rec.points[i].real()),
                    fmt_double(rec.points[i].imag()),
                    fmt_double(std::abs(rec.points[i]))});
  }
  return out;
}

}  // namespace

struct qrdyn_orbit {
  OrbitRecord rec;
};
struct qrdyn_grid {
  EscapeGrid grid;
};
struct qrdyn_components {
  ComponentSet set;
};
struct qrdyn_growth {
  GrowthCurve curve;
};
struct qrdyn_coverage {
  CoverageResult result;
};
struct qrdyn_scan {
  ScanSummary summary;
  bool planar = true;
};
struct qrdyn_verify {
  std::vector<VerifyCheck> checks;
};

extern "C" {

const char* qrdyn_status_str(qrdyn_status s) {
  switch (s) {
    case QRDYN_OK: return "ok";
    case QRDYN_ERR_ARGUMENT: return "invalid argument";
    case QRDYN_ERR_DOMAIN: return "domain error";
    case QRDYN_ERR_COMPUTE: return "computation error";
    case QRDYN_ERR_IO: return "i/o error";
  }
  return "unknown status";
}

const char* qrdyn_last_error(void) { return g_last_error.c_str(); }

qrdyn_map_spec qrdyn_map_spec_default(qrdyn_map_kind kind) {
  MapParams p{};
  return {static_cast<int>(kind), p.c, p.d, p.lambda};
}

qrdyn_escape_policy qrdyn_escape_policy_default(void) {
  EscapePolicy p{};
  return {p.escape_radius, p.budget, p.persistence};
}

const char* qrdyn_orbit_class_str(qrdyn_orbit_class c) {
  return orbit_class_name(static_cast<OrbitClass>(c));
}

/* ---- map evaluation ---- */

qrdyn_status qrdyn_eval_a(double r, double* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = eval_a(r);
  });
}

qrdyn_status qrdyn_eval_g(qrdyn_complex z, double c, qrdyn_complex* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = to_c(eval_g(to_cpp(z), c));
  });
}

qrdyn_status qrdyn_eval_L(qrdyn_extended z, qrdyn_extended* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = to_c(eval_L(to_cpp(z)));
  });
}

qrdyn_status qrdyn_eval_L_inv(qrdyn_extended w, qrdyn_extended* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = to_c(eval_L_inv(to_cpp(w)));
  });
}

qrdyn_status qrdyn_eval_h(qrdyn_complex z, double c, qrdyn_complex* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = to_c(eval_h(to_cpp(z), c));
  });
}

qrdyn_status qrdyn_eval_phi(qrdyn_complex z, qrdyn_complex* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = to_c(eval_phi(to_cpp(z)));
  });
}

qrdyn_status qrdyn_eval_f(qrdyn_complex z, const qrdyn_map_spec* spec,
                          qrdyn_complex* out, int* overflowed) {
  return guarded([&] {
    require(out, "null out pointer");
    MapSpec s = to_cpp(spec);
    validate_params(s.params);
    EvalResult r = eval_f(to_cpp(z), s.params);
    *out = to_c(r.value);
    if (overflowed) *overflowed = r.overflowed ? 1 : 0;
  });
}

qrdyn_status qrdyn_eval_map(const qrdyn_map_spec* spec, qrdyn_complex z,
                            qrdyn_complex* out, int* overflowed) {
  return guarded([&] {
    require(out, "null out pointer");
    MapSpec s = to_cpp(spec);
    validate_params(s.params);
    EvalResult r = eval_map(s, to_cpp(z));
    *out = to_c(r.value);
    if (overflowed) *overflowed = r.overflowed ? 1 : 0;
  });
}

qrdyn_status qrdyn_eval_f3d(qrdyn_cyl3 p, double lambda, qrdyn_cyl3* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = to_c(eval_f3d(to_cpp(p), lambda));
  });
}

qrdyn_status qrdyn_annulus_bounds(int n, double* rin, double* rout) {
  return guarded([&] {
    require(rin, "null out pointer");
    require(rout, "null out pointer");
    Annulus a(n);
    *rin = a.rin;
    *rout = a.rout;
  });
}

/* ---- orbits ---- */

qrdyn_status qrdyn_orbit_run(const qrdyn_map_spec* spec, qrdyn_complex z0,
                             const qrdyn_escape_policy* policy, qrdyn_orbit** out) {
  return guarded([&] {
    require(out, "null out pointer");
    auto* handle = new qrdyn_orbit{iterate(to_cpp(spec), to_cpp(z0), to_cpp(policy))};
    *out = handle;
  });
}

void qrdyn_orbit_free(qrdyn_orbit* orbit) { delete orbit; }

qrdyn_orbit_class qrdyn_orbit_classification(const qrdyn_orbit* orbit) {
  return static_cast<qrdyn_orbit_class>(orbit->rec.classification);
}
long qrdyn_orbit_iterations(const qrdyn_orbit* orbit) { return orbit->rec.iterations_used; }
long qrdyn_orbit_returns(const qrdyn_orbit* orbit) { return orbit->rec.returns; }
long qrdyn_orbit_sign_flip_index(const qrdyn_orbit* orbit) {
  return orbit->rec.sign_flip_index;
}
int qrdyn_orbit_saturated(const qrdyn_orbit* orbit) { return orbit->rec.saturated ? 1 : 0; }
size_t qrdyn_orbit_point_count(const qrdyn_orbit* orbit) { return orbit->rec.points.size(); }

qrdyn_status qrdyn_orbit_point(const qrdyn_orbit* orbit, size_t i, qrdyn_complex* z,
                               long* iteration) {
  return guarded([&] {
    require(orbit, "null orbit");
    if (i >= orbit->rec.points.size())
      throw std::invalid_argument("orbit point index out of range");
    if (z) *z = to_c(orbit->rec.points[i]);
    if (iteration) *iteration = orbit->rec.point_index[i];
  });
}

qrdyn_status qrdyn_orbit_write_csv(const qrdyn_orbit* orbit, const char* path) {
  return guarded_io([&] {
    require(orbit, "null orbit");
    require(path, "null path");
    write_text_file(path, orbit_trace_csv(orbit->rec));
  });
}

qrdyn_status qrdyn_orbit_batch_csv(const qrdyn_map_spec* spec,
                                   const qrdyn_complex* starts, size_t count,
                                   const qrdyn_escape_policy* policy,
                                   const char* path) {
  return guarded_io([&] {
    require(starts, "null starts");
    require(path, "null path");
    MapSpec s = to_cpp(spec);
    EscapePolicy pol = to_cpp(policy);
    std::string out = csv_row(
        {"start_re", "start_im", "classification", "iterations", "returns",
         "sign_flip_index"});
    for (size_t i = 0; i < count; ++i) {
      OrbitRecord rec = iterate(s, to_cpp(starts[i]), pol);
      out += csv_row({fmt_double(rec.start.real()), fmt_double(rec.start.imag()),
                      orbit_class_name(rec.classification),
                      std::to_string(rec.iterations_used), std::to_string(rec.returns),
                      std::to_string(rec.sign_flip_index)});
    }
    write_text_file(path, out);
  });
}

qrdyn_status qrdyn_verify_rotation(qrdyn_complex z, double c, int* pass,
                                   double* lower_margin, double* upper_margin,
                                   int* annulus) {
  return guarded([&] {
    RotationCheck rc = verify_rotation_lower(to_cpp(z), c);
    if (pass) *pass = rc.pass ? 1 : 0;
    if (lower_margin) *lower_margin = rc.lower_margin;
    if (upper_margin) *upper_margin = rc.upper_margin;
    if (annulus) *annulus = rc.annulus;
  });
}

qrdyn_status qrdyn_find_sign_flip(qrdyn_complex z, double c, long k_max, long* k_out,
                                  int* found) {
  return guarded([&] {
    auto k = find_sign_flip(to_cpp(z), c, k_max);
    if (found) *found = k.has_value() ? 1 : 0;
    if (k_out) *k_out = k.value_or(-1);
  });
}

qrdyn_status qrdyn_detect_returns(qrdyn_complex z0, double c, long budget,
                                  long* returns) {
  return guarded([&] {
    require(returns, "null out pointer");
    *returns = detect_returns(to_cpp(z0), c, budget);
  });
}

qrdyn_status qrdyn_integer_ray_check(long n, long steps, const qrdyn_map_spec* spec,
                                     double* max_deviation) {
  return guarded([&] {
    require(max_deviation, "null out pointer");
    MapParams p = spec ? to_cpp(spec).params : MapParams{};
    *max_deviation = integer_ray_check(n, steps, p);
  });
}

/* ---- grids ---- */

qrdyn_status qrdyn_sample_annulus(int n, long count, uint64_t seed,
                                  int halfplane_re_positive, qrdyn_complex* out) {
  return guarded([&] {
    require(out, "null out buffer");
    auto pts = sample_annulus(n, count, seed, halfplane_re_positive != 0);
    for (size_t i = 0; i < pts.size(); ++i) out[i] = to_c(pts[i]);
  });
}

qrdyn_status qrdyn_grid_compute(const qrdyn_map_spec* spec, qrdyn_window window,
                                long nx, long ny, const qrdyn_escape_policy* policy,
                                int workers, qrdyn_grid** out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = new qrdyn_grid{
        escape_grid(to_cpp(spec), to_cpp(window), nx, ny, to_cpp(policy), workers)};
  });
}

void qrdyn_grid_free(qrdyn_grid* grid) { delete grid; }

long qrdyn_grid_nx(const qrdyn_grid* grid) { return grid->grid.nx; }
long qrdyn_grid_ny(const qrdyn_grid* grid) { return grid->grid.ny; }

qrdyn_status qrdyn_grid_cell(const qrdyn_grid* grid, long ix, long iy,
                             int* classification, int* escape_iteration) {
  return guarded([&] {
    require(grid, "null grid");
    if (ix < 0 || ix >= grid->grid.nx || iy < 0 || iy >= grid->grid.ny)
      throw std::invalid_argument("grid cell index out of range");
    size_t idx = grid->grid.index(ix, iy);
    if (classification) *classification = grid->grid.cells[idx];
    if (escape_iteration) *escape_iteration = grid->grid.iters[idx];
  });
}

qrdyn_status qrdyn_grid_write_pgm(const qrdyn_grid* grid, const char* path) {
  return guarded_io([&] {
    require(grid, "null grid");
    require(path, "null path");
    write_grid_pgm(grid->grid, path);
  });
}

qrdyn_status qrdyn_grid_write_ppm(const qrdyn_grid* grid, const char* path) {
  return guarded_io([&] {
    require(grid, "null grid");
    require(path, "null path");
    write_grid_ppm(grid->grid, path);
  });
}

qrdyn_status qrdyn_grid_separated(const qrdyn_grid* grid, qrdyn_complex start,
                                  qrdyn_orbit_class blocking, int* separated) {
  return guarded([&] {
    require(grid, "null grid");
    require(separated, "null out pointer");
    *separated = separated_from_boundary(grid->grid, to_cpp(start),
                                         static_cast<OrbitClass>(blocking))
                     ? 1
                     : 0;
  });
}

qrdyn_status qrdyn_grid_components(const qrdyn_grid* grid, qrdyn_orbit_class which,
                                   int dilate, qrdyn_components** out) {
  return guarded([&] {
    require(grid, "null grid");
    require(out, "null out pointer");
    *out = new qrdyn_components{
        label_components(grid->grid, static_cast<OrbitClass>(which), dilate != 0)};
  });
}

void qrdyn_components_free(qrdyn_components* set) { delete set; }

size_t qrdyn_components_count(const qrdyn_components* set) {
  return set->set.components.size();
}

qrdyn_status qrdyn_components_info(const qrdyn_components* set, size_t i,
                                   long* cell_count, qrdyn_window* bounding_box,
                                   int* touches_window_boundary) {
  return guarded([&] {
    require(set, "null component set");
    if (i >= set->set.components.size())
      throw std::invalid_argument("component index out of range");
    const ComponentReport& rep = set->set.components[i];
    if (cell_count) *cell_count = rep.cell_count;
    if (bounding_box)
      *bounding_box = {rep.bounding_box.xmin, rep.bounding_box.xmax,
                       rep.bounding_box.ymin, rep.bounding_box.ymax};
    if (touches_window_boundary)
      *touches_window_boundary = rep.touches_window_boundary ? 1 : 0;
  });
}

qrdyn_status qrdyn_components_locate(const qrdyn_components* set,
                                     const qrdyn_grid* grid, qrdyn_complex z,
                                     int* label) {
  return guarded([&] {
    require(set, "null component set");
    require(grid, "null grid");
    require(label, "null out pointer");
    *label = set->set.component_of(grid->grid, to_cpp(z));
  });
}

qrdyn_status qrdyn_components_write_csv(const qrdyn_components* set, const char* path) {
  return guarded_io([&] {
    require(set, "null component set");
    require(path, "null path");
    write_text_file(path, components_csv(set->set));
  });
}

qrdyn_status qrdyn_max_modulus(const qrdyn_map_spec* spec, double r, long samples,
                               double* out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = max_modulus(to_cpp(spec), r, samples);
  });
}

qrdyn_status qrdyn_growth_curve(const qrdyn_map_spec* spec, const double* radii,
                                size_t count, long samples, qrdyn_growth** out) {
  return guarded([&] {
    require(radii, "null radii");
    require(out, "null out pointer");
    std::vector<double> rs(radii, radii + count);
    *out = new qrdyn_growth{growth_ratio(to_cpp(spec), rs, samples)};
  });
}

void qrdyn_growth_free(qrdyn_growth* curve) { delete curve; }

qrdyn_status qrdyn_growth_point(const qrdyn_growth* curve, size_t i, double* r,
                                double* m_value, double* ratio) {
  return guarded([&] {
    require(curve, "null growth curve");
    if (i >= curve->curve.radii.size())
      throw std::invalid_argument("growth point index out of range");
    if (r) *r = curve->curve.radii[i];
    if (m_value) *m_value = curve->curve.m_values[i];
    if (ratio) *ratio = curve->curve.ratios[i];
  });
}

qrdyn_status qrdyn_growth_write_csv(const qrdyn_growth* curve, const char* path) {
  return guarded_io([&] {
    require(curve, "null growth curve");
    require(path, "null path");
    write_text_file(path, growth_csv(curve->curve));
  });
}

qrdyn_status qrdyn_circle_coverage(const qrdyn_map_spec* spec, double R, double rho,
                                   double L, long targets, double tol,
                                   qrdyn_coverage** out) {
  return guarded([&] {
    require(out, "null out pointer");
    *out = new qrdyn_coverage{circle_coverage(to_cpp(spec), R, rho, L, targets, tol)};
  });
}

void qrdyn_coverage_free(qrdyn_coverage* coverage) { delete coverage; }

double qrdyn_coverage_fraction(const qrdyn_coverage* coverage) {
  return coverage->result.fraction;
}
long qrdyn_coverage_hits(const qrdyn_coverage* coverage) { return coverage->result.hits; }

qrdyn_status qrdyn_coverage_witness(const qrdyn_coverage* coverage, size_t i,
                                    qrdyn_complex* target, qrdyn_complex* preimage,
                                    double* residual, int* found) {
  return guarded([&] {
    require(coverage, "null coverage");
    if (i >= coverage->result.witnesses.size())
      throw std::invalid_argument("witness index out of range");
    const CoverageWitness& w = coverage->result.witnesses[i];
    if (target) *target = to_c(w.target);
    if (preimage) *preimage = to_c(w.preimage);
    if (residual) *residual = w.residual;
    if (found) *found = w.found ? 1 : 0;
  });
}

qrdyn_status qrdyn_coverage_write_csv(const qrdyn_coverage* coverage, const char* path) {
  return guarded_io([&] {
    require(coverage, "null coverage");
    require(path, "null path");
    write_text_file(path, coverage_csv(coverage->result));
  });
}

/* ---- dilatation ---- */

qrdyn_status qrdyn_jacobian_fd(const qrdyn_map_spec* spec, qrdyn_complex z,
                               double step, double jac[4], int* reliable) {
  return guarded([&] {
    require(jac, "null jacobian buffer");
    bool rel = true;
    Jacobian2 j = jacobian_fd(to_cpp(spec), to_cpp(z), step, &rel);
    std::memcpy(jac, j.data(), sizeof(double) * 4);
    if (reliable) *reliable = rel ? 1 : 0;
  });
}

qrdyn_status qrdyn_beltrami(const qrdyn_map_spec* spec, qrdyn_complex z, double step,
                            double* mu_abs, double* k, int* reliable) {
  return guarded([&] {
    BeltramiResult b = beltrami(to_cpp(spec), to_cpp(z), step);
    if (mu_abs) *mu_abs = b.mu_abs;
    if (k) *k = b.k;
    if (reliable) *reliable = b.reliable ? 1 : 0;
  });
}

qrdyn_status qrdyn_dilatation_3d(double lambda, qrdyn_cyl3 p, double step,
                                 double singular_values[3], double* k, int* reliable) {
  return guarded([&] {
    Dilatation3Report rep = dilatation_3d(lambda, to_cpp(p), step);
    if (singular_values)
      std::memcpy(singular_values, rep.singular_values.data(), sizeof(double) * 3);
    if (k) *k = rep.k;
    if (reliable) *reliable = rep.reliable ? 1 : 0;
  });
}

qrdyn_status qrdyn_scan_dilatation(const qrdyn_map_spec* spec, qrdyn_window region,
                                   long samples, double step, int workers,
                                   qrdyn_scan** out) {
  return guarded([&] {
    require(out, "null out pointer");
    MapSpec s = to_cpp(spec);
    *out = new qrdyn_scan{scan_dilatation(s, to_cpp(region), samples, step, workers),
                          is_planar(s.kind)};
  });
}

void qrdyn_scan_free(qrdyn_scan* scan) { delete scan; }

double qrdyn_scan_max_k(const qrdyn_scan* scan) { return scan->summary.max_reliable_k; }
long qrdyn_scan_evaluated(const qrdyn_scan* scan) { return scan->summary.evaluated; }
long qrdyn_scan_unreliable(const qrdyn_scan* scan) { return scan->summary.unreliable; }
long qrdyn_scan_excluded(const qrdyn_scan* scan) {
  return scan->summary.excluded_oscillation;
}

qrdyn_status qrdyn_scan_write_csv(const qrdyn_scan* scan, const char* path) {
  return guarded_io([&] {
    require(scan, "null scan");
    require(path, "null path");
    std::string out;
    if (scan->planar) {
      out = csv_row({"re", "im", "step", "mu_abs", "k", "reliable"});
      for (const auto& row : scan->summary.rows)
        out += csv_row({fmt_double(row.z.real()), fmt_double(row.z.imag()),
                        fmt_double(row.step), fmt_double(row.mu_abs),
                        fmt_double(row.k), row.reliable ? "1" : "0"});
    } else {
      out = csv_row({"r", "theta", "x3", "step", "s1", "s2", "s3", "k", "reliable"});
      for (const auto& row : scan->summary.rows)
        out += csv_row({fmt_double(row.p.r), fmt_double(row.p.theta),
                        fmt_double(row.p.x3), fmt_double(row.step),
                        fmt_double(row.singular_values[0]),
                        fmt_double(row.singular_values[1]),
                        fmt_double(row.singular_values[2]), fmt_double(row.k),
                        row.reliable ? "1" : "0"});
    }
    write_text_file(path, out);
  });
}

/* ---- verification ---- */

qrdyn_status qrdyn_verify_run(const char* suite, const qrdyn_map_spec* spec,
                              uint64_t seed, int quick, int workers,
                              qrdyn_verify** out) {
  return guarded([&] {
    require(suite, "null suite name");
    require(out, "null out pointer");
    VerifyOptions opt;
    if (spec) opt.params = to_cpp(spec).params;
    validate_params(opt.params);
    opt.seed = seed;
    opt.quick = quick != 0;
    opt.workers = workers > 0 ? workers : 1;
    *out = new qrdyn_verify{run_verify(suite, opt)};
  });
}

void qrdyn_verify_free(qrdyn_verify* report) { delete report; }

size_t qrdyn_verify_count(const qrdyn_verify* report) { return report->checks.size(); }

qrdyn_status qrdyn_verify_item(const qrdyn_verify* report, size_t i, const char** name,
                               int* pass, const char** detail) {
  return guarded([&] {
    require(report, "null report");
    if (i >= report->checks.size())
      throw std::invalid_argument("verify item index out of range");
    const VerifyCheck& c = report->checks[i];
    if (name) *name = c.name.c_str();
    if (pass) *pass = c.pass ? 1 : 0;
    if (detail) *detail = c.detail.c_str();
  });
}

int qrdyn_verify_all_passed(const qrdyn_verify* report) {
  for (const auto& c : report->checks)
    if (!c.pass) return 0;
  return 1;
}

/* ---- misc ---- */

qrdyn_status qrdyn_file_digest(const char* path, uint64_t* digest) {
  return guarded_io([&] {
    require(path, "null path");
    require(digest, "null out pointer");
    *digest = file_digest(path);
  });
}

}  // extern "C"

#include "qrdyn/dilatation.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

namespace qrdyn {

namespace {

Complex eval_checked(const MapSpec& spec, Complex z) {
  EvalResult r = eval_map(spec, z);
  if (r.overflowed || !is_finite(r.value))
    throw std::runtime_error("finite-difference sample overflowed");
  return r.value;
}

// Jacobi eigenvalue sweep for a symmetric 3x3 matrix; returns eigenvalues
// in descending order. Plenty for the fixed 3x3 case.
std::array<double, 3> symmetric_eigenvalues(std::array<double, 9> m) {
  for (int sweep = 0; sweep < 32; ++sweep) {
    double off = std::abs(m[1]) + std::abs(m[2]) + std::abs(m[5]);
    if (off < 1e-15 * (std::abs(m[0]) + std::abs(m[4]) + std::abs(m[8]) + 1e-300))
      break;
    static const int pq[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (auto& idx : pq) {
      int p = idx[0], q = idx[1];
      double apq = m[p * 3 + q];
      if (apq == 0.0) continue;
      double app = m[p * 3 + p], aqq = m[q * 3 + q];
      double theta = 0.5 * (aqq - app) / apq;
      double t = (theta >= 0.0 ? 1.0 : -1.0) /
                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
      double cth = 1.0 / std::sqrt(t * t + 1.0);
      double sth = t * cth;
      std::array<double, 9> r = m;
      for (int k = 0; k < 3; ++k) {
        double mkp = m[k * 3 + p], mkq = m[k * 3 + q];
        r[k * 3 + p] = cth * mkp - sth * mkq;
        r[k * 3 + q] = sth * mkp + cth * mkq;
      }
      m = r;
      for (int k = 0; k < 3; ++k) {
        double mpk = m[p * 3 + k], mqk = m[q * 3 + k];
        r[p * 3 + k] = cth * mpk - sth * mqk;
        r[q * 3 + k] = sth * mpk + cth * mqk;
      }
      m = r;
    }
  }
  std::array<double, 3> ev = {m[0], m[4], m[8]};
  std::sort(ev.begin(), ev.end(), std::greater<double>());
  return ev;
}

// Deterministic low-discrepancy sequence (van der Corput radical inverse).
double radical_inverse(unsigned long long i, unsigned base) {
  double inv = 1.0 / base, f = inv, x = 0.0;
  while (i > 0) {
    x += static_cast<double>(i % base) * f;
    i /= base;
    f *= inv;
  }
  return x;
}

}  // namespace

double default_fd_step(double scale) {
  return std::max(1e-9, 1e-6 * std::abs(scale));
}

Jacobian2 jacobian_fd(const MapSpec& spec, Complex z, double step, bool* reliable) {
  if (!(step > 0.0)) throw std::invalid_argument("jacobian_fd: step must be > 0");
  if (!is_planar(spec.kind))
    throw std::invalid_argument("jacobian_fd: planar maps only");
  validate_params(spec.params);
  if (reliable) *reliable = seam_distance(spec, z) >= 10.0 * step;

  Complex fx1 = eval_checked(spec, z + Complex(step, 0.0));
  Complex fx0 = eval_checked(spec, z - Complex(step, 0.0));
  Complex fy1 = eval_checked(spec, z + Complex(0.0, step));
  Complex fy0 = eval_checked(spec, z - Complex(0.0, step));
  double inv2h = 0.5 / step;
  return {(fx1.real() - fx0.real()) * inv2h, (fy1.real() - fy0.real()) * inv2h,
          (fx1.imag() - fx0.imag()) * inv2h, (fy1.imag() - fy0.imag()) * inv2h};
}

Jacobian3 jacobian_fd_3d(double lambda, const CylPoint3& p, double step, bool* reliable) {
  if (!(step > 0.0)) throw std::invalid_argument("jacobian_fd_3d: step must be > 0");
  if (!(p.r > 0.0))
    throw std::domain_error("jacobian_fd_3d: axis points are not differentiable-sampled");
  if (reliable) *reliable = p.r >= 10.0 * step;

  Vec3 base = cyl_to_cart(p);
  Jacobian3 j{};
  for (int col = 0; col < 3; ++col) {
    Vec3 hi = base, lo = base;
    (col == 0 ? hi.x : col == 1 ? hi.y : hi.z) += step;
    (col == 0 ? lo.x : col == 1 ? lo.y : lo.z) -= step;
    Vec3 fhi = eval_f3d_cart(hi, lambda);
    Vec3 flo = eval_f3d_cart(lo, lambda);
    double inv2h = 0.5 / step;
    j[0 * 3 + col] = (fhi.x - flo.x) * inv2h;
    j[1 * 3 + col] = (fhi.y - flo.y) * inv2h;
    j[2 * 3 + col] = (fhi.z - flo.z) * inv2h;
  }
  return j;
}

BeltramiResult beltrami(const MapSpec& spec, Complex z, double step) {
  bool reliable = true;
  Jacobian2 j = jacobian_fd(spec, z, step, &reliable);
  double ux = j[0], uy = j[1], vx = j[2], vy = j[3];
  double det = ux * vy - uy * vx;
  if (!(det > 0.0))
    throw OrientationError("beltrami: degenerate or orientation-reversing Jacobian");
  double fz = std::hypot(ux + vy, vx - uy) * 0.5;
  double fzb = std::hypot(ux - vy, vx + uy) * 0.5;
  BeltramiResult out;
  out.mu_abs = fzb / fz;
  out.k = (1.0 + out.mu_abs) / (1.0 - out.mu_abs);
  out.reliable = reliable;
  return out;
}

Dilatation3Report dilatation_3d(double lambda, const CylPoint3& p, double step) {
  bool reliable = true;
  Jacobian3 j = jacobian_fd_3d(lambda, p, step, &reliable);
  double det = j[0] * (j[4] * j[8] - j[5] * j[7]) -
               j[1] * (j[3] * j[8] - j[5] * j[6]) +
               j[2] * (j[3] * j[7] - j[4] * j[6]);
  if (!(det > 0.0))
    throw OrientationError("dilatation_3d: degenerate or orientation-reversing Jacobian");

  std::array<double, 9> jtj{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double s = 0.0;
      for (int k = 0; k < 3; ++k) s += j[k * 3 + a] * j[k * 3 + b];
      jtj[a * 3 + b] = s;
    }
  std::array<double, 3> ev = symmetric_eigenvalues(jtj);

  Dilatation3Report out;
  for (int i = 0; i < 3; ++i) out.singular_values[i] = std::sqrt(std::max(ev[i], 0.0));
  double s1 = out.singular_values[0], s2 = out.singular_values[1],
         s3 = out.singular_values[2];
  double prod = s1 * s2 * s3;
  out.outer = s1 * s1 * s1 / prod;
  out.inner = prod / (s3 * s3 * s3);
  out.k = std::max(out.outer, out.inner);
  out.reliable = reliable;
  return out;
}

namespace {

int histogram_bin(double k) {
  if (k < 1.1) return 0;
  if (k < 1.5) return 1;
  if (k < 2.0) return 2;
  if (k < 3.0) return 3;
  if (k < 5.0) return 4;
  if (k < 10.0) return 5;
  return 6;
}

struct SampleOutcome {
  bool excluded = false;
  bool failed = false;
  ScanRow row{};
};

SampleOutcome scan_one_planar(const MapSpec& spec, Complex z, double step) {
  SampleOutcome out;
  if (in_oscillation_zone(spec, z)) {
    out.excluded = true;
    return out;
  }
  out.row.z = z;
  out.row.step = step;
  try {
    // estimates near seams are still reported, flagged unreliable, and kept
    // out of the scan maximum
    BeltramiResult b = beltrami(spec, z, step);
    out.row.mu_abs = b.mu_abs;
    out.row.k = b.k;
    out.row.reliable = b.reliable;
  } catch (const std::exception&) {
    out.failed = true;
  }
  return out;
}

SampleOutcome scan_one_3d(const MapSpec& spec, const CylPoint3& p, double step) {
  SampleOutcome out;
  out.row.p = p;
  out.row.step = step;
  if (p.r < 10.0 * step) {
    out.row.reliable = false;
    return out;
  }
  try {
    Dilatation3Report rep = dilatation_3d(spec.params.lambda, p, step);
    out.row.singular_values = rep.singular_values;
    out.row.k = rep.k;
    out.row.reliable = rep.reliable;
  } catch (const std::exception&) {
    out.failed = true;
  }
  return out;
}

}  // namespace

ScanSummary scan_dilatation(const MapSpec& spec, const Window& region, long samples,
                            double step, int workers) {
  if (samples < 1) throw std::invalid_argument("scan_dilatation: samples must be >= 1");
  if (!region.valid()) throw std::invalid_argument("scan_dilatation: invalid region");
  if (!(step > 0.0)) throw std::invalid_argument("scan_dilatation: step must be > 0");
  validate_params(spec.params);
  if (workers < 1) workers = 1;

  std::vector<SampleOutcome> outcomes(static_cast<size_t>(samples));
  auto run_range = [&](long lo, long hi) {
    for (long i = lo; i < hi; ++i) {
      double u = radical_inverse(static_cast<unsigned long long>(i) + 1, 2);
      double v = radical_inverse(static_cast<unsigned long long>(i) + 1, 3);
      if (is_planar(spec.kind)) {
        Complex z(region.xmin + u * region.width(), region.ymin + v * region.height());
        outcomes[static_cast<size_t>(i)] = scan_one_planar(spec, z, step);
      } else {
        double w = radical_inverse(static_cast<unsigned long long>(i) + 1, 5);
        CylPoint3 p{region.xmin + u * region.width(),
                    -kPi + w * 2.0 * kPi,
                    region.ymin + v * region.height()};
        outcomes[static_cast<size_t>(i)] = scan_one_3d(spec, p, step);
      }
    }
  };

  if (workers == 1 || samples < 64) {
    run_range(0, samples);
  } else {
    std::vector<std::thread> pool;
    long chunk = (samples + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      long lo = w * chunk, hi = std::min<long>(samples, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(run_range, lo, hi);
    }
    for (auto& t : pool) t.join();
  }

  ScanSummary summary;
  summary.requested = samples;
  for (auto& o : outcomes) {
    if (o.excluded) {
      ++summary.excluded_oscillation;
      continue;
    }
    if (o.failed) {
      ++summary.orientation_failures;
      continue;
    }
    ++summary.evaluated;
    summary.rows.push_back(o.row);
    if (!o.row.reliable) {
      ++summary.unreliable;
      continue;
    }
    summary.max_reliable_k = std::max(summary.max_reliable_k, o.row.k);
    ++summary.histogram[static_cast<size_t>(histogram_bin(o.row.k))];
  }
  return summary;
}

}  // namespace qrdyn

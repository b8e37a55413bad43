#include "qrdyn/grids.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <random>
#include <sstream>
#include <thread>

#include "qrdyn/io.hpp"

namespace qrdyn {

namespace {

// Uniform double in [0,1) built from the top 53 bits of the generator, so
// samples do not depend on the library's distribution implementation.
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace

std::vector<Complex> sample_annulus(int n, long count, uint64_t seed,
                                    bool halfplane_re_positive) {
  if (count < 1) throw std::invalid_argument("sample_annulus: count must be >= 1");
  Annulus ann(n);  // validates n >= 2
  std::mt19937_64 rng(seed);
  std::vector<Complex> out;
  out.reserve(static_cast<size_t>(count));
  double rin2 = ann.rin * ann.rin, rout2 = ann.rout * ann.rout;
  for (long i = 0; i < count; ++i) {
    // keep samples strictly interior to the open annulus
    double u = 1e-9 + uniform01(rng) * (1.0 - 2e-9);
    double v = 1e-9 + uniform01(rng) * (1.0 - 2e-9);
    double r = std::sqrt(rin2 + u * (rout2 - rin2));
    double t = halfplane_re_positive ? (-kPi / 2.0 + v * kPi) : (-kPi + v * 2.0 * kPi);
    out.push_back(from_polar(r, t));
  }
  return out;
}

std::optional<std::pair<long, long>> EscapeGrid::locate(Complex z) const {
  if (!window.contains(z)) return std::nullopt;
  long ix = static_cast<long>((z.real() - window.xmin) / window.width() * nx);
  long iy = static_cast<long>((z.imag() - window.ymin) / window.height() * ny);
  ix = std::clamp<long>(ix, 0, nx - 1);
  iy = std::clamp<long>(iy, 0, ny - 1);
  return std::make_pair(ix, iy);
}

EscapeGrid escape_grid(const MapSpec& spec, const Window& window, long nx, long ny,
                       const EscapePolicy& policy, int workers) {
  if (nx < 2 || ny < 2) throw std::invalid_argument("escape_grid: nx, ny must be >= 2");
  if (!window.valid()) throw std::invalid_argument("escape_grid: degenerate window");
  validate_policy(policy);
  validate_params(spec.params);
  if (!is_planar(spec.kind))
    throw std::invalid_argument("escape_grid: planar maps only");
  if (workers < 1) workers = 1;

  EscapeGrid grid;
  grid.window = window;
  grid.nx = nx;
  grid.ny = ny;
  grid.spec = spec;
  grid.policy = policy;
  grid.cells.assign(static_cast<size_t>(nx) * ny, 0);
  grid.iters.assign(static_cast<size_t>(nx) * ny, -1);

  auto run_rows = [&](long row_lo, long row_hi) {
    for (long iy = row_lo; iy < row_hi; ++iy) {
      for (long ix = 0; ix < nx; ++ix) {
        OrbitRecord rec = iterate(spec, grid.center(ix, iy), policy);
        size_t idx = grid.index(ix, iy);
        grid.cells[idx] = static_cast<uint8_t>(rec.classification);
        grid.iters[idx] =
            rec.classification == OrbitClass::Escaping
                ? static_cast<int32_t>(rec.iterations_used)
                : -1;
      }
    }
  };

  if (workers == 1) {
    run_rows(0, ny);
  } else {
    std::vector<std::thread> pool;
    long band = (ny + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
      long lo = w * band, hi = std::min<long>(ny, lo + band);
      if (lo >= hi) break;
      pool.emplace_back(run_rows, lo, hi);
    }
    for (auto& t : pool) t.join();
  }
  return grid;
}

ComponentSet label_components(const EscapeGrid& grid, OrbitClass which, bool dilate) {
  ComponentSet set;
  set.which = which;
  set.dilated = dilate;
  set.nx = grid.nx;
  set.ny = grid.ny;
  const long nx = grid.nx, ny = grid.ny;

  std::vector<uint8_t> mask(static_cast<size_t>(nx) * ny, 0);
  for (long iy = 0; iy < ny; ++iy)
    for (long ix = 0; ix < nx; ++ix)
      if (grid.cell(ix, iy) == which) mask[grid.index(ix, iy)] = 1;

  if (dilate) {
    std::vector<uint8_t> grown = mask;
    for (long iy = 0; iy < ny; ++iy)
      for (long ix = 0; ix < nx; ++ix) {
        if (!mask[grid.index(ix, iy)]) continue;
        if (ix > 0) grown[grid.index(ix - 1, iy)] = 1;
        if (ix + 1 < nx) grown[grid.index(ix + 1, iy)] = 1;
        if (iy > 0) grown[grid.index(ix, iy - 1)] = 1;
        if (iy + 1 < ny) grown[grid.index(ix, iy + 1)] = 1;
      }
    mask.swap(grown);
  }

  set.labels.assign(mask.size(), -1);
  double dx = grid.window.width() / nx, dy = grid.window.height() / ny;

  int next_label = 0;
  std::deque<std::pair<long, long>> queue;
  for (long sy = 0; sy < ny; ++sy) {
    for (long sx = 0; sx < nx; ++sx) {
      size_t sidx = grid.index(sx, sy);
      if (!mask[sidx] || set.labels[sidx] >= 0) continue;
      ComponentReport rep;
      rep.label = next_label;
      rep.ix_min = rep.ix_max = sx;
      rep.iy_min = rep.iy_max = sy;
      set.labels[sidx] = next_label;
      queue.push_back({sx, sy});
      while (!queue.empty()) {
        auto [cx, cy] = queue.front();
        queue.pop_front();
        ++rep.cell_count;
        rep.ix_min = std::min(rep.ix_min, cx);
        rep.ix_max = std::max(rep.ix_max, cx);
        rep.iy_min = std::min(rep.iy_min, cy);
        rep.iy_max = std::max(rep.iy_max, cy);
        if (cx == 0 || cx == nx - 1 || cy == 0 || cy == ny - 1)
          rep.touches_window_boundary = true;
        const long nbr[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
        for (auto& nb : nbr) {
          long nxx = nb[0], nyy = nb[1];
          if (nxx < 0 || nxx >= nx || nyy < 0 || nyy >= ny) continue;
          size_t nidx = grid.index(nxx, nyy);
          if (!mask[nidx] || set.labels[nidx] >= 0) continue;
          set.labels[nidx] = next_label;
          queue.push_back({nxx, nyy});
        }
      }
      rep.bounding_box = Window{grid.window.xmin + rep.ix_min * dx,
                                grid.window.xmin + (rep.ix_max + 1) * dx,
                                grid.window.ymin + rep.iy_min * dy,
                                grid.window.ymin + (rep.iy_max + 1) * dy};
      set.components.push_back(rep);
      ++next_label;
    }
  }
  return set;
}

int ComponentSet::component_of(const EscapeGrid& grid, Complex z) const {
  auto cell = grid.locate(z);
  if (!cell) return -1;
  int32_t label = labels[grid.index(cell->first, cell->second)];
  return label;
}

bool separated_from_boundary(const EscapeGrid& grid, Complex start, OrbitClass blocking) {
  auto cell = grid.locate(start);
  if (!cell) throw std::invalid_argument("separated_from_boundary: start outside window");
  const long nx = grid.nx, ny = grid.ny;
  std::vector<uint8_t> seen(static_cast<size_t>(nx) * ny, 0);
  std::deque<std::pair<long, long>> queue;
  if (grid.cell(cell->first, cell->second) == blocking) return true;
  queue.push_back(*cell);
  seen[grid.index(cell->first, cell->second)] = 1;
  while (!queue.empty()) {
    auto [cx, cy] = queue.front();
    queue.pop_front();
    if (cx == 0 || cx == nx - 1 || cy == 0 || cy == ny - 1) return false;
    const long nbr[4][2] = {{cx - 1, cy}, {cx + 1, cy}, {cx, cy - 1}, {cx, cy + 1}};
    for (auto& nb : nbr) {
      long nxx = nb[0], nyy = nb[1];
      if (nxx < 0 || nxx >= nx || nyy < 0 || nyy >= ny) continue;
      size_t nidx = grid.index(nxx, nyy);
      if (seen[nidx] || grid.cell(nxx, nyy) == blocking) continue;
      seen[nidx] = 1;
      queue.push_back({nxx, nyy});
    }
  }
  return true;
}

namespace {

uint8_t gray_of_cell(OrbitClass c, int32_t iter) {
  switch (c) {
    case OrbitClass::Undetermined: return 0;
    case OrbitClass::Fixed: return 64;
    case OrbitClass::Returning: return 128;
    case OrbitClass::Escaping:
      return static_cast<uint8_t>(255 - (iter >= 0 ? iter % 64 : 0));
  }
  return 0;
}

}  // namespace

void write_grid_pgm(const EscapeGrid& grid, const std::string& path) {
  std::vector<uint8_t> px(static_cast<size_t>(grid.nx) * grid.ny);
  // image rows run top-down: row 0 of the file is the ymax edge
  for (long iy = 0; iy < grid.ny; ++iy)
    for (long ix = 0; ix < grid.nx; ++ix) {
      size_t src = grid.index(ix, grid.ny - 1 - iy);
      px[static_cast<size_t>(iy) * grid.nx + ix] =
          gray_of_cell(static_cast<OrbitClass>(grid.cells[src]), grid.iters[src]);
    }
  write_pgm(path, static_cast<int>(grid.nx), static_cast<int>(grid.ny), px);
}

void write_grid_ppm(const EscapeGrid& grid, const std::string& path) {
  std::vector<uint8_t> px(static_cast<size_t>(grid.nx) * grid.ny * 3);
  for (long iy = 0; iy < grid.ny; ++iy)
    for (long ix = 0; ix < grid.nx; ++ix) {
      size_t src = grid.index(ix, grid.ny - 1 - iy);
      size_t dst = (static_cast<size_t>(iy) * grid.nx + ix) * 3;
      auto c = static_cast<OrbitClass>(grid.cells[src]);
      if (c == OrbitClass::Escaping) {
        int32_t k = std::max<int32_t>(grid.iters[src], 0);
        px[dst + 0] = static_cast<uint8_t>(255 - k % 64);
        px[dst + 1] = static_cast<uint8_t>(128 + k % 128);
        px[dst + 2] = static_cast<uint8_t>(64 + k % 192);
      } else {
        uint8_t g = gray_of_cell(c, -1);
        px[dst + 0] = px[dst + 1] = px[dst + 2] = g;
      }
    }
  write_ppm(path, static_cast<int>(grid.nx), static_cast<int>(grid.ny), px);
}

std::string components_csv(const ComponentSet& set) {
  std::string out = csv_row({"label", "cell_count", "ix_min", "ix_max", "iy_min",
                             "iy_max", "x_min", "x_max", "y_min", "y_max",
                             "touches_boundary"});
  for (const auto& c : set.components) {
    out += csv_row({std::to_string(c.label), std::to_string(c.cell_count),
                    std::to_string(c.ix_min), std::to_string(c.ix_max),
                    std::to_string(c.iy_min), std::to_string(c.iy_max),
                    fmt_double(c.bounding_box.xmin), fmt_double(c.bounding_box.xmax),
                    fmt_double(c.bounding_box.ymin), fmt_double(c.bounding_box.ymax),
                    c.touches_window_boundary ? "1" : "0"});
  }
  return out;
}

namespace {

// Magnitude of the map at a circle point; saturated evaluations read as the
// saturation bound, which keeps the maximum well-defined.
double circle_value(const MapSpec& spec, double r, double theta) {
  if (spec.kind == MapKind::Cyl3D) {
    CylPoint3 p{r, theta, 0.0};
    CylPoint3 q = eval_f3d(p, spec.params.lambda);
    return std::hypot(q.r, q.x3);
  }
  EvalResult e = eval_map(spec, from_polar(r, theta));
  if (e.overflowed || !is_finite(e.value)) return kSaturationMagnitude;
  return std::abs(e.value);
}

}  // namespace

double max_modulus(const MapSpec& spec, double r, long samples) {
  if (samples < 16) throw std::invalid_argument("max_modulus: samples must be >= 16");
  if (!(r > 0.0)) throw std::invalid_argument("max_modulus: radius must be > 0");
  validate_params(spec.params);

  double best = 0.0, best_theta = 0.0;
  for (long j = 0; j < samples; ++j) {
    double theta = -kPi + 2.0 * kPi * static_cast<double>(j) / samples;
    double v = circle_value(spec, r, theta);
    if (v > best) {
      best = v;
      best_theta = theta;
    }
  }
  // golden-section refinement around the coarse argmax
  double span = 2.0 * kPi / samples;
  double lo = best_theta - span, hi = best_theta + span;
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
  double f1 = circle_value(spec, r, x1), f2 = circle_value(spec, r, x2);
  for (int it = 0; it < 80; ++it) {
    if (f1 < f2) {
      lo = x1;
      x1 = x2;
      f1 = f2;
      x2 = lo + gr * (hi - lo);
      f2 = circle_value(spec, r, x2);
    } else {
      hi = x2;
      x2 = x1;
      f2 = f1;
      x1 = hi - gr * (hi - lo);
      f1 = circle_value(spec, r, x1);
    }
  }
  return std::max(best, std::max(f1, f2));
}

GrowthCurve growth_ratio(const MapSpec& spec, const std::vector<double>& radii,
                         long samples) {
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1]))
      throw std::invalid_argument("growth_ratio: radii must be strictly increasing");
  GrowthCurve curve;
  for (double r : radii) {
    double m = max_modulus(spec, r, samples);
    curve.radii.push_back(r);
    curve.m_values.push_back(m);
    curve.ratios.push_back(m / r);
  }
  return curve;
}

std::string growth_csv(const GrowthCurve& curve) {
  std::string out = csv_row({"r", "max_modulus", "ratio"});
  for (size_t i = 0; i < curve.radii.size(); ++i)
    out += csv_row({fmt_double(curve.radii[i]), fmt_double(curve.m_values[i]),
                    fmt_double(curve.ratios[i])});
  return out;
}

namespace {

// Region id of the piecewise-smooth branch containing z, used to lock the
// Newton refinement to one formula. Maps other than f are globally smooth
// away from poles and use a single region.
int branch_region(const MapSpec& spec, Complex z) {
  if (spec.kind != MapKind::PlanarF) return 0;
  double s = z.real() + std::abs(z.imag());
  int half = z.imag() >= 0.0 ? 0 : 1;
  if (s >= 0.0) return 1 + half;
  if (s > -1.0) return 3 + half;
  return 5 + half;
}

struct NewtonOutcome {
  bool ok = false;
  Complex x{};
  double residual = 0.0;
};

// Fourth-root seeds for the exp(z^4) sector of f: solve z^4 = log((y-z)/d)
// ~ log(y/d) + 2 pi i k and keep the roots pointing into the left cone.
// These carry the search when the target circle is far outside the annulus
// and the phase of exp(z^4) oscillates too fast for the coarse scan.
std::vector<Complex> cone_seeds(const MapSpec& spec, Complex y, double R, double rho) {
  std::vector<Complex> seeds;
  if (spec.kind != MapKind::PlanarF) return seeds;
  double logq = std::log(std::abs(y) / spec.params.d);
  if (!(logq > 0.0)) return seeds;
  double ay = principal_arg(y);
  for (int k = -3; k <= 3; ++k) {
    Complex w0(logq, ay + 2.0 * kPi * k);
    double mag = std::pow(std::norm(w0), 0.125);  // |w0|^(1/4)
    double base = principal_arg(w0) / 4.0;
    // root angle nearest pi
    double best_angle = base;
    double best_dist = std::abs(std::remainder(base - kPi, 2.0 * kPi));
    for (int m = 1; m < 4; ++m) {
      double ang = base + m * kPi / 2.0;
      double dist = std::abs(std::remainder(ang - kPi, 2.0 * kPi));
      if (dist < best_dist) {
        best_dist = dist;
        best_angle = ang;
      }
    }
    Complex z0 = from_polar(mag, std::remainder(best_angle, 2.0 * kPi));
    double s = z0.real() + std::abs(z0.imag());
    double r = std::abs(z0);
    if (s <= -1.0 && r > R && r < rho) seeds.push_back(z0);
  }
  return seeds;
}

NewtonOutcome newton_refine(const MapSpec& spec, Complex x0, Complex target,
                            double R, double rho, double tol) {
  NewtonOutcome out;
  int region = branch_region(spec, x0);
  Complex x = x0;
  for (int it = 0; it < 48; ++it) {
    EvalResult e = eval_map(spec, x);
    if (e.overflowed || !is_finite(e.value)) return out;
    Complex resid = target - e.value;
    double rn = std::abs(resid);
    if (rn < 0.25 * tol) break;
    double h = std::max(1e-10, 1e-7 * std::abs(x));
    EvalResult ex1 = eval_map(spec, x + Complex(h, 0));
    EvalResult ex0 = eval_map(spec, x - Complex(h, 0));
    EvalResult ey1 = eval_map(spec, x + Complex(0, h));
    EvalResult ey0 = eval_map(spec, x - Complex(0, h));
    if (ex1.overflowed || ex0.overflowed || ey1.overflowed || ey0.overflowed)
      return out;
    double inv2h = 0.5 / h;
    double a = (ex1.value.real() - ex0.value.real()) * inv2h;
    double c = (ex1.value.imag() - ex0.value.imag()) * inv2h;
    double b = (ey1.value.real() - ey0.value.real()) * inv2h;
    double d = (ey1.value.imag() - ey0.value.imag()) * inv2h;
    double det = a * d - b * c;
    if (det == 0.0 || !std::isfinite(det)) return out;
    double dx = (resid.real() * d - b * resid.imag()) / det;
    double dy = (a * resid.imag() - resid.real() * c) / det;
    Complex nx = x + Complex(dx, dy);
    if (!is_finite(nx)) return out;
    if (branch_region(spec, nx) != region) return out;  // left the smooth branch
    double rr = std::abs(nx);
    if (rr <= R || rr >= rho) return out;
    x = nx;
  }
  EvalResult final = eval_map(spec, x);
  if (final.overflowed || !is_finite(final.value)) return out;
  out.residual = std::abs(final.value - target);
  double rr = std::abs(x);
  out.ok = out.residual < tol && rr > R && rr < rho;
  out.x = x;
  return out;
}

}  // namespace

CoverageResult circle_coverage(const MapSpec& spec, double R, double rho, double L,
                               long targets, double tol) {
  if (!(R >= 0.0) || !(R < rho)) throw std::invalid_argument("circle_coverage: need R < rho");
  if (!(L > 0.0)) throw std::invalid_argument("circle_coverage: need L > 0");
  if (targets < 1) throw std::invalid_argument("circle_coverage: targets must be >= 1");
  validate_params(spec.params);
  if (!is_planar(spec.kind))
    throw std::invalid_argument("circle_coverage: planar maps only");
  if (tol <= 0.0) tol = 1e-6 * std::max(1.0, L);

  // shared coarse scan of the annulus, reused for every target
  const long nr = 96, nt = 256;
  struct CoarsePoint {
    Complex x;
    Complex fx;
    bool usable;
  };
  std::vector<CoarsePoint> coarse;
  coarse.reserve(static_cast<size_t>(nr) * nt);
  for (long i = 0; i < nr; ++i) {
    double r = R + (i + 0.5) * (rho - R) / nr;
    for (long j = 0; j < nt; ++j) {
      double theta = -kPi + 2.0 * kPi * (j + 0.5) / nt;
      Complex x = from_polar(r, theta);
      EvalResult e = eval_map(spec, x);
      bool usable = !e.overflowed && is_finite(e.value);
      coarse.push_back({x, usable ? e.value : Complex{}, usable});
    }
  }

  CoverageResult result;
  result.L = L;
  result.targets = targets;
  for (long j = 0; j < targets; ++j) {
    Complex y = from_polar(L, -kPi + 2.0 * kPi * static_cast<double>(j) / targets);
    // best few coarse candidates by residual
    const int keep = 8;
    std::vector<std::pair<double, size_t>> best;
    for (size_t idx = 0; idx < coarse.size(); ++idx) {
      if (!coarse[idx].usable) continue;
      double resid = std::abs(coarse[idx].fx - y);
      if (best.size() < keep) {
        best.push_back({resid, idx});
        std::push_heap(best.begin(), best.end());
      } else if (resid < best.front().first) {
        std::pop_heap(best.begin(), best.end());
        best.back() = {resid, idx};
        std::push_heap(best.begin(), best.end());
      }
    }
    std::sort(best.begin(), best.end());

    std::vector<Complex> starts;
    for (auto& cand : best) starts.push_back(coarse[cand.second].x);
    for (Complex seed : cone_seeds(spec, y, R, rho)) starts.push_back(seed);

    CoverageWitness w;
    w.target = y;
    for (Complex x0 : starts) {
      NewtonOutcome n = newton_refine(spec, x0, y, R, rho, tol);
      if (n.ok) {
        w.found = true;
        w.preimage = n.x;
        w.residual = n.residual;
        break;
      }
    }
    if (w.found) ++result.hits;
    result.witnesses.push_back(w);
  }
  result.fraction = static_cast<double>(result.hits) / static_cast<double>(targets);
  return result;
}

std::string coverage_csv(const CoverageResult& result) {
  std::string out = csv_row({"target_re", "target_im", "found", "preimage_re",
                             "preimage_im", "residual"});
  for (const auto& w : result.witnesses) {
    out += csv_row({fmt_double(w.target.real()), fmt_double(w.target.imag()),
                    w.found ? "1" : "0", fmt_double(w.preimage.real()),
                    fmt_double(w.preimage.imag()), fmt_double(w.residual)});
  }
  return out;
}

}  // namespace qrdyn

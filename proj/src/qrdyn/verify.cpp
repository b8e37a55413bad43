#include "qrdyn/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <functional>
#include <random>
#include <sstream>

#include "qrdyn/dilatation.hpp"
#include "qrdyn/grids.hpp"
#include "qrdyn/maps.hpp"
#include "qrdyn/orbits.hpp"

namespace qrdyn {

namespace {

double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

double uniform(std::mt19937_64& rng, double lo, double hi) {
  return lo + uniform01(rng) * (hi - lo);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

struct Ctx {
  VerifyOptions opt;
  long n_small;   // generic per-case sample count
  long n_points;  // heavier point counts
};

using CheckFn = std::function<VerifyCheck(const Ctx&)>;

VerifyCheck make(const std::string& name, bool pass, const std::string& detail) {
  return {name, pass, detail};
}

// ---- maps suite -----------------------------------------------------------

VerifyCheck check_gid_sector(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x11);
  double worst = 0.0;
  for (long i = 0; i < ctx.n_points; ++i) {
    double y = uniform(rng, -3.0, 3.0);
    double x = std::abs(y) + 1.0 + uniform(rng, 0.0, 3.0);
    Complex z(x, y);
    worst = std::max(worst, std::abs(eval_g(z, ctx.opt.params.c) - z));
  }
  return make("maps/gid-sector-identity", worst <= 1e-12, "max |g(z)-z| = " + fmt(worst));
}

VerifyCheck check_modulus_law(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x12);
  double worst = 0.0;
  for (long i = 0; i < ctx.n_points; ++i) {
    double r = uniform(rng, 1e-3, 3.0);
    double t = uniform(rng, -kPi, kPi);
    Complex z = from_polar(r, t);
    double rr = std::abs(z);
    double expect = rr < 0.5 ? (4.0 / 3.0) * rr : rr < 1.0 ? 1.0 / (2.0 - rr) : rr;
    worst = std::max(worst, std::abs(std::abs(eval_g(z, ctx.opt.params.c)) - expect));
  }
  return make("maps/g-modulus-law", worst <= 1e-12, "max deviation = " + fmt(worst));
}

VerifyCheck check_disk_invariance(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x13);
  bool ok = true;
  double worst_boundary = 0.0;
  for (long i = 0; i < ctx.n_points; ++i) {
    Complex inside = from_polar(uniform(rng, 1e-6, 1.0 - 1e-12), uniform(rng, -kPi, kPi));
    if (!(std::abs(eval_g(inside, ctx.opt.params.c)) < 1.0)) ok = false;
    Complex on = from_polar(1.0, uniform(rng, -kPi, kPi));
    worst_boundary =
        std::max(worst_boundary, std::abs(std::abs(eval_g(on, ctx.opt.params.c)) - 1.0));
  }
  return make("maps/g-unit-disk-invariance", ok && worst_boundary <= 1e-12,
              "boundary deviation = " + fmt(worst_boundary));
}

double seam_two_sided_max(const std::function<Complex(Complex)>& f,
                          const std::vector<std::pair<Complex, Complex>>& probes,
                          double eps) {
  double worst = 0.0;
  for (auto& [z, u] : probes) {
    Complex a = f(z + eps * u);
    Complex b = f(z - eps * u);
    worst = std::max(worst, std::abs(a - b));
  }
  return worst;
}

VerifyCheck check_g_seams(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x14);
  const double eps = 1e-7;
  double c = ctx.opt.params.c;
  std::vector<std::pair<Complex, Complex>> probes;
  for (long i = 0; i < ctx.n_small; ++i) {
    double t = uniform(rng, -kPi, kPi);
    for (double r : {0.5, 1.0, 2.0})
      probes.push_back({from_polar(r, t), from_polar(1.0, t)});  // radial crossing
    double rr = uniform(rng, 1.0 + 1e-6, 2.0 - 1e-6);
    double a = eval_a(rr);
    // angular crossing of the wedge boundary |t| = a(r)
    probes.push_back({from_polar(rr, a), Complex(0, 1) * from_polar(1.0, a)});
    probes.push_back({from_polar(rr, -a), Complex(0, 1) * from_polar(1.0, -a)});
  }
  double worst =
      seam_two_sided_max([&](Complex z) { return eval_g(z, c); }, probes, eps);
  return make("maps/g-seam-continuity", worst <= 100.0 * eps,
              "max jump / eps = " + fmt(worst / eps));
}

VerifyCheck check_f_seams(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x15);
  const double eps = 1e-7;
  MapParams p = ctx.opt.params;
  std::vector<std::pair<Complex, Complex>> probes;
  double inv_sqrt2 = 1.0 / std::sqrt(2.0);
  for (long i = 0; i < ctx.n_small; ++i) {
    double y = uniform(rng, -2.5, 2.5);
    for (double s : {0.0, -1.0}) {
      Complex z(s - std::abs(y), y);
      Complex u(inv_sqrt2, (y >= 0.0 ? 1.0 : -1.0) * inv_sqrt2);  // normal to the seam
      probes.push_back({z, u});
    }
  }
  double worst = seam_two_sided_max(
      [&](Complex z) { return eval_f(z, p).value; }, probes, eps);
  return make("maps/f-seam-continuity", worst <= 100.0 * eps,
              "max jump / eps = " + fmt(worst / eps));
}

VerifyCheck check_annulus_mapping(const Ctx& ctx) {
  double c = ctx.opt.params.c;
  bool ok = true;
  double worst_identity = 0.0;
  for (int n = 2; n <= 20; ++n) {
    for (double k : {0.25, 0.75}) {
      double lhs = 1.0 / (2.0 - (1.0 - 1.0 / (n + k)));
      double rhs = 1.0 - 1.0 / (n + 1 + k);
      worst_identity = std::max(worst_identity, std::abs(lhs - rhs));
    }
    Annulus next(n + 1);
    auto pts = sample_annulus(n, ctx.n_small, ctx.opt.seed + n);
    for (Complex z : pts)
      if (!next.contains(eval_g(z, c))) ok = false;
  }
  return make("maps/annulus-mapping", ok && worst_identity <= 1e-14,
              "radius identity deviation = " + fmt(worst_identity));
}

VerifyCheck check_mobius_roundtrip(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x16);
  double worst = 0.0;
  for (long i = 0; i < ctx.n_points; ++i) {
    Complex w(uniform(rng, -5.0, 5.0), uniform(rng, -5.0, 5.0));
    if (std::abs(w) < 1e-3) continue;
    Extended back = eval_L(eval_L_inv(Extended::finite(w)));
    if (back.infinite) continue;
    worst = std::max(worst, std::abs(back.value - w));
  }
  return make("maps/mobius-round-trip", worst <= 1e-12, "max |L(Linv(w))-w| = " + fmt(worst));
}

VerifyCheck check_conjugate_ray(const Ctx& ctx) {
  double c = ctx.opt.params.c;
  double worst = 0.0;
  for (int n = 1; n <= 100; ++n) {
    Complex h = eval_h(Complex(n + 1.0, 0.0), c);
    worst = std::max(worst, std::abs(h - Complex(n + 2.0, 0.0)) / (n + 2.0));
  }
  return make("maps/conjugate-ray", worst <= 1e-9, "max rel |h(n+1)-(n+2)| = " + fmt(worst));
}

VerifyCheck check_half_plane_image(const Ctx& ctx) {
  bool ok = true;
  for (int n = 2; n <= 10; ++n) {
    for (Complex z : sample_annulus(n, ctx.n_small, ctx.opt.seed + 31 * n)) {
      Extended img = eval_L(z);
      if (img.infinite || !(img.value.real() > 0.0)) ok = false;
    }
  }
  return make("maps/half-plane-image", ok, ok ? "Re L(A_n) > 0" : "violation found");
}

VerifyCheck check_f3d_involution(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x17);
  double lambda = ctx.opt.params.lambda;
  double worst = 0.0;
  for (long i = 0; i < ctx.n_points; ++i) {
    CylPoint3 p{uniform(rng, 0.1, 10.0), uniform(rng, -kPi, kPi) , uniform(rng, -10.0, 10.0)};
    if (p.theta == -kPi) p.theta = kPi;
    Vec3 back = cyl_to_cart(eval_f3d(eval_f3d(p, lambda), lambda));
    worst = std::max(worst, cart_distance(back, cyl_to_cart(p)));
  }
  return make("maps/f3d-involution", worst <= 1e-12, "max |f(f(p))-p| = " + fmt(worst));
}

VerifyCheck check_f3d_homogeneity(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x18);
  double lambda = ctx.opt.params.lambda;
  double worst = 0.0;
  for (long i = 0; i < ctx.n_points; ++i) {
    CylPoint3 p{uniform(rng, 0.1, 5.0), uniform(rng, -kPi, kPi), uniform(rng, -5.0, 5.0)};
    if (p.theta == -kPi) p.theta = kPi;
    CylPoint3 doubled{2.0 * p.r, p.theta, 2.0 * p.x3};
    Vec3 a = cyl_to_cart(eval_f3d(doubled, lambda));
    Vec3 b = cyl_to_cart(eval_f3d(p, lambda));
    b.x *= 2.0; b.y *= 2.0; b.z *= 2.0;
    worst = std::max(worst, cart_distance(a, b));
  }
  return make("maps/f3d-homogeneity", worst <= 1e-12, "max |f(2p)-2f(p)| = " + fmt(worst));
}

VerifyCheck check_polar_roundtrip(const Ctx& ctx) {
  std::mt19937_64 rng(ctx.opt.seed ^ 0x19);
  double worst = 0.0;
  for (long i = 0; i < ctx.n_points; ++i) {
    Complex z(uniform(rng, -10.0, 10.0), uniform(rng, -10.0, 10.0));
    if (std::abs(z) < 1e-6) continue;
    worst = std::max(worst, std::abs(from_polar(to_polar(z)) - z) / std::abs(z));
  }
  return make("maps/polar-round-trip", worst <= 1e-12, "max rel error = " + fmt(worst));
}

// ---- orbits suite ---------------------------------------------------------

VerifyCheck check_orbit_determinism(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarF, ctx.opt.params};
  EscapePolicy policy;
  Complex z0(1.7, 0.4);
  OrbitRecord a = iterate(spec, z0, policy);
  OrbitRecord b = iterate(spec, z0, policy);
  bool same = a.classification == b.classification &&
              a.iterations_used == b.iterations_used && a.returns == b.returns &&
              a.points.size() == b.points.size();
  for (size_t i = 0; same && i < a.points.size(); ++i) {
    if (std::memcmp(&a.points[i], &b.points[i], sizeof(Complex)) != 0) same = false;
  }
  return make("orbits/determinism", same,
              same ? "bitwise identical records" : "records differ");
}

VerifyCheck check_annulus_march(const Ctx& ctx) {
  double c = ctx.opt.params.c;
  bool ok = true;
  for (int n = 2; n <= 6; ++n) {
    for (Complex z : sample_annulus(n, std::max<long>(ctx.n_small / 10, 10),
                                    ctx.opt.seed + 7 * n)) {
      Complex w = z;
      for (int k = 1; k <= 100; ++k) {
        w = eval_g(w, c);
        if (!Annulus(n + k).contains(w)) {
          ok = false;
          break;
        }
      }
    }
  }
  return make("orbits/annulus-march", ok, ok ? "g^k(A_n) in A_{n+k}, k <= 100"
                                             : "march left its annulus");
}

VerifyCheck check_argument_growth(const Ctx& ctx) {
  double c = ctx.opt.params.c;
  double factor = 1.0 + 2.0 * c / kPi;
  double worst = 0.0;
  for (Complex z : sample_annulus(2, ctx.n_small, ctx.opt.seed ^ 0x21, true)) {
    Complex w = z;
    for (int k = 0; k < 200; ++k) {
      double t = principal_arg(w);
      Complex next = eval_g(w, c);
      double t2 = principal_arg(next);
      if (t > 0.0 && t < kPi / 2.0 && t2 > 0) worst = std::max(worst, factor * t - t2);
      w = next;
      if (w.real() <= 0.0) break;
    }
  }
  return make("orbits/argument-growth-positive", worst <= 1e-12,
              "max shortfall = " + fmt(worst));
}

VerifyCheck check_argument_recovery(const Ctx& ctx) {
  double c = ctx.opt.params.c;
  double cprime = 0.5 * c * std::sqrt(2.0);
  double factor = 1.0 - 2.0 * c / kPi;
  double worst = 0.0;
  for (Complex z0 : sample_annulus(3, ctx.n_small, ctx.opt.seed ^ 0x22)) {
    Complex w = z0;
    for (int k = 0; k < 300; ++k) {
      double t = principal_arg(w);
      int m = annulus_index(w);
      Complex next = eval_g(w, c);
      if (m >= 2 && t > -kPi / 2.0 && t <= 0.0) {
        double t2 = principal_arg(next);
        double bound = factor * t + cprime / ((m + 1.0) * (m + 1.0));
        worst = std::max(worst, bound - t2);
      }
      w = next;
    }
  }
  return make("orbits/argument-recovery-nonpositive", worst <= 1e-12,
              "max shortfall = " + fmt(worst));
}

VerifyCheck check_rotation_inequalities(const Ctx& ctx) {
  bool ok = true;
  long tested = 0;
  for (int n = 2; n <= 10; ++n) {
    for (Complex z : sample_annulus(n, ctx.n_small, ctx.opt.seed + 13 * n, true)) {
      RotationCheck rc = verify_rotation_lower(z, ctx.opt.params.c);
      ++tested;
      if (!rc.pass) ok = false;
    }
  }
  return make("orbits/rotation-inequalities", ok,
              std::to_string(tested) + " samples across A_2..A_10");
}

VerifyCheck check_sign_flip(const Ctx& ctx) {
  long worst = -1;
  bool ok = true;
  for (int n = 2; n <= 10; ++n) {
    for (Complex z : sample_annulus(n, ctx.n_small, ctx.opt.seed + 17 * n, true)) {
      auto k = find_sign_flip(z, ctx.opt.params.c, 1000);
      if (!k) {
        ok = false;
      } else {
        worst = std::max(worst, *k);
      }
    }
  }
  return make("orbits/sign-flip-bounded", ok, "max flip index = " + std::to_string(worst));
}

VerifyCheck check_no_escape_rings(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarH, ctx.opt.params};
  EscapePolicy policy;
  bool ok = true;
  int n_hi = ctx.opt.quick ? 5 : 10;
  long per = ctx.opt.quick ? 25 : 100;
  for (int n = 2; n <= n_hi; ++n) {
    for (Complex w : sample_annulus(n, per, ctx.opt.seed + 19 * n)) {
      Extended u = eval_L(w);
      if (u.infinite) { ok = false; continue; }
      OrbitRecord rec = iterate(spec, u.value, policy);
      if (rec.classification != OrbitClass::Returning || rec.returns < 5) ok = false;
    }
  }
  return make("orbits/no-escape-rings", ok,
              ok ? "all ring points RETURNING with >= 5 returns" : "violation found");
}

VerifyCheck check_integer_ray(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarF, ctx.opt.params};
  OrbitRecord rec = iterate(spec, Complex(2.0, 0.0), EscapePolicy{});
  double dev = integer_ray_check(2, 100, ctx.opt.params);
  bool ok = rec.classification == OrbitClass::Escaping && dev < 1e-6;
  return make("orbits/integer-ray-escape", ok,
              "classification " + std::string(orbit_class_name(rec.classification)) +
                  ", max deviation = " + fmt(dev));
}

// ---- grids suite ----------------------------------------------------------

VerifyCheck check_tile_independence(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarF, ctx.opt.params};
  Window win{1.2, 2.8, -0.6, 0.6};
  EscapeGrid a = escape_grid(spec, win, 48, 48, EscapePolicy{}, 1);
  EscapeGrid b = escape_grid(spec, win, 48, 48, EscapePolicy{}, 3);
  bool same = a.cells == b.cells && a.iters == b.iters;
  return make("grids/tile-independence", same,
              same ? "1-worker and 3-worker grids identical" : "grids differ");
}

VerifyCheck check_resolution_refinement(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarH, ctx.opt.params};
  Window win{0.2, 0.8, 0.6, 1.2};
  long n = ctx.opt.quick ? 32 : 64;
  EscapeGrid coarse = escape_grid(spec, win, n, n, EscapePolicy{}, ctx.opt.workers);
  EscapeGrid fine = escape_grid(spec, win, 2 * n, 2 * n, EscapePolicy{}, ctx.opt.workers);
  long flips = 0;
  for (long iy = 0; iy < n; ++iy)
    for (long ix = 0; ix < n; ++ix) {
      OrbitClass c00 = fine.cell(2 * ix, 2 * iy);
      if (fine.cell(2 * ix + 1, 2 * iy) != c00 || fine.cell(2 * ix, 2 * iy + 1) != c00 ||
          fine.cell(2 * ix + 1, 2 * iy + 1) != c00)
        continue;
      if (coarse.cell(ix, iy) != c00) ++flips;
    }
  return make("grids/resolution-refinement", flips == 0,
              std::to_string(flips) + " inconsistent cells");
}

VerifyCheck check_separation_witness(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarF, ctx.opt.params};
  // window with dyadic cell size whose center row lies on the real axis and
  // whose center column passes through z = 2
  long n = ctx.opt.quick ? 128 : 256;
  double cell = 4.0 / n;
  Window win{2.0 - cell * (n / 2) - cell / 2, 2.0 + cell * (n / 2) - cell / 2,
             0.0 - cell * (n / 2) - cell / 2, 0.0 + cell * (n / 2) - cell / 2};
  // confirm the window really contains the separating ring
  for (Complex w : sample_annulus(2, 200, ctx.opt.seed ^ 0x31)) {
    Extended img = eval_L(w);
    if (img.infinite || !win.contains(img.value))
      return make("grids/separation-witness", false, "window misses L(A_2)");
  }
  EscapeGrid grid = escape_grid(spec, win, n, n, EscapePolicy{}, ctx.opt.workers);
  bool separated = separated_from_boundary(grid, Complex(2.0, 0.0), OrbitClass::Returning);
  ComponentSet comps = label_components(grid, OrbitClass::Escaping, true);
  int comp = comps.component_of(grid, Complex(2.0, 0.0));
  bool bounded = comp >= 0 && !comps.components[static_cast<size_t>(comp)].touches_window_boundary;
  return make("grids/separation-witness", separated && bounded,
              std::string(separated ? "separated" : "NOT separated") + ", component " +
                  (bounded ? "bounded" : "unbounded or missing"));
}

VerifyCheck check_growth_consistency(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarF, ctx.opt.params};
  bool ok = true;
  for (double r : {2.0, 2.5}) {
    double prev = 0.0;
    for (long samples : {64L, 128L, 256L, 512L}) {
      double m = max_modulus(spec, r, samples);
      if (m < prev - 1e-9 * std::max(1.0, prev)) ok = false;
      prev = m;
    }
  }
  return make("grids/growth-curve-consistency", ok,
              ok ? "max modulus non-decreasing in samples" : "violation found");
}

VerifyCheck check_coverage_monotonicity(const Ctx& ctx) {
  MapSpec spec{MapKind::PlanarF, ctx.opt.params};
  long targets = ctx.opt.quick ? 16 : 32;
  double prev = 2.0;
  bool ok = true;
  std::string detail;
  for (double L : {5.0, 1e20, 1e80, 1e110}) {
    double frac = circle_coverage(spec, 1.0, 4.0, L, targets).fraction;
    if (frac > prev + 1e-12) ok = false;
    detail += (detail.empty() ? "" : ", ") + fmt(frac);
    prev = frac;
  }
  return make("grids/coverage-monotonicity", ok, "fractions: " + detail);
}

VerifyCheck check_sample_determinism(const Ctx& ctx) {
  auto a = sample_annulus(5, 1000, ctx.opt.seed);
  auto b = sample_annulus(5, 1000, ctx.opt.seed);
  bool same = a.size() == b.size();
  for (size_t i = 0; same && i < a.size(); ++i)
    if (a[i] != b[i]) same = false;
  return make("grids/sample-annulus-determinism", same,
              same ? "identical sets for identical seed" : "sets differ");
}

// ---- dilatation spot checks folded into the grids suite -------------------

VerifyCheck check_conjugation_sanity(const Ctx& ctx) {
  MapSpec g{MapKind::PlanarG, ctx.opt.params};
  MapSpec h{MapKind::PlanarH, ctx.opt.params};
  double worst = 0.0;
  std::mt19937_64 rng(ctx.opt.seed ^ 0x41);
  for (int i = 0; i < 12; ++i) {
    Complex w = from_polar(uniform(rng, 0.55, 0.9), uniform(rng, 0.3, 2.5));
    if (seam_distance(g, w) < 1e-4 || in_oscillation_zone(g, w)) continue;
    Extended z = eval_L(w);
    if (z.infinite) continue;
    double kg = beltrami(g, w, 1e-6).k;
    double kh = beltrami(h, z.value, 1e-6 * std::max(1.0, std::abs(z.value))).k;
    worst = std::max(worst, std::abs(kg - kh));
  }
  return make("grids/conjugation-sanity", worst <= 1e-4,
              "max |K_g - K_h| = " + fmt(worst));
}

}  // namespace

std::vector<VerifyCheck> run_verify(const std::string& suite, const VerifyOptions& opt) {
  Ctx ctx;
  ctx.opt = opt;
  ctx.n_small = opt.quick ? 100 : 1000;
  ctx.n_points = opt.quick ? 1000 : 10000;

  std::vector<std::pair<std::string, CheckFn>> registry = {
      {"maps", check_gid_sector},
      {"maps", check_modulus_law},
      {"maps", check_disk_invariance},
      {"maps", check_g_seams},
      {"maps", check_f_seams},
      {"maps", check_annulus_mapping},
      {"maps", check_mobius_roundtrip},
      {"maps", check_conjugate_ray},
      {"maps", check_half_plane_image},
      {"maps", check_f3d_involution},
      {"maps", check_f3d_homogeneity},
      {"maps", check_polar_roundtrip},
      {"orbits", check_orbit_determinism},
      {"orbits", check_annulus_march},
      {"orbits", check_argument_growth},
      {"orbits", check_argument_recovery},
      {"orbits", check_rotation_inequalities},
      {"orbits", check_sign_flip},
      {"orbits", check_no_escape_rings},
      {"orbits", check_integer_ray},
      {"grids", check_tile_independence},
      {"grids", check_resolution_refinement},
      {"grids", check_separation_witness},
      {"grids", check_growth_consistency},
      {"grids", check_coverage_monotonicity},
      {"grids", check_sample_determinism},
      {"grids", check_conjugation_sanity},
  };

  bool all = suite == "all";
  if (!all && suite != "maps" && suite != "orbits" && suite != "grids")
    throw std::invalid_argument("unknown verify suite: " + suite);

  std::vector<VerifyCheck> out;
  for (auto& [group, fn] : registry) {
    if (!all && group != suite) continue;
    try {
      out.push_back(fn(ctx));
    } catch (const std::exception& e) {
      out.push_back({group + "/check", false, std::string("exception: ") + e.what()});
    }
  }
  return out;
}

}  // namespace qrdyn

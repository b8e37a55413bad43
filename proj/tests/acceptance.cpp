// Acceptance suite: runs every acceptance criterion at its stated size and
// tolerance with the default parameters (c = 0.5, d = 1e-3, lambda = 1) and
// prints one PASS/FAIL line per criterion. Exit status is the number of
// failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "qrdyn/dilatation.hpp"
#include "qrdyn/grids.hpp"
#include "qrdyn/maps.hpp"
#include "qrdyn/orbits.hpp"

using namespace qrdyn;

namespace {

constexpr uint64_t kSeed = 20260801;

struct Criterion {
  bool pass = false;
  std::string detail;
};

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

// 1. Integer-ray identity: max_{k<=100} |f^k(2) - (k+2)| < 1e-6.
Criterion criterion_integer_ray() {
  double dev = integer_ray_check(2, 100);
  return {dev < 1e-6, "max |f^k(2)-(k+2)| = " + fmt(dev) + " (tol 1e-6)"};
}

// 2. Annulus march: n = 2..20, 1e3 samples per ring, all g-images inside
//    A_{n+1} radii +- 1e-12, and |g| = 1/(2-r) to 1e-12.
Criterion criterion_annulus_march() {
  long misses = 0;
  double worst_mod = 0.0;
  for (int n = 2; n <= 20; ++n) {
    Annulus next(n + 1);
    for (Complex z : sample_annulus(n, 1000, kSeed + n)) {
      Complex g = eval_g(z, 0.5);
      if (!next.contains(g, 1e-12)) ++misses;
      double law = 1.0 / (2.0 - std::abs(z));
      worst_mod = std::max(worst_mod, std::abs(std::abs(g) - law));
    }
  }
  return {misses == 0 && worst_mod <= 1e-12,
          std::to_string(misses) + " ring misses, modulus-law deviation " +
              fmt(worst_mod)};
}

// 3. Identity sector: 1e3 samples with Re z >= |Im z| + 1 fixed to 1e-12.
Criterion criterion_identity_sector() {
  std::mt19937_64 rng(kSeed ^ 3);
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    double y = uniform(rng, -4.0, 4.0);
    double x = std::abs(y) + 1.0 + uniform(rng, 0.0, 4.0);
    Complex z(x, y);
    worst = std::max(worst, std::abs(eval_g(z, 0.5) - z));
  }
  return {worst <= 1e-12, "max |g(z)-z| = " + fmt(worst)};
}

// 4. Seam continuity: four seams of g and both seams of f, eps = 1e-7,
//    C = 100, 1e3 points per seam.
Criterion criterion_seams() {
  std::mt19937_64 rng(kSeed ^ 4);
  const double eps = 1e-7;
  double worst = 0.0;
  MapParams p{};
  for (int i = 0; i < 1000; ++i) {
    double t = uniform(rng, -kPi, kPi);
    for (double r : {0.5, 1.0, 2.0}) {
      Complex u = from_polar(1.0, t);
      Complex z = from_polar(r, t);
      worst = std::max(worst, std::abs(eval_g(z + eps * u, 0.5) -
                                       eval_g(z - eps * u, 0.5)));
    }
    double rr = uniform(rng, 1.0 + 1e-9, 2.0 - 1e-9);
    double a = eval_a(rr);
    double sgn = (i % 2 == 0) ? 1.0 : -1.0;
    Complex z = from_polar(rr, sgn * a);
    Complex u = Complex(0, 1) * from_polar(1.0, sgn * a);
    worst = std::max(worst,
                     std::abs(eval_g(z + eps * u, 0.5) - eval_g(z - eps * u, 0.5)));

    double y = uniform(rng, -2.5, 2.5);
    double inv_sqrt2 = 1.0 / std::sqrt(2.0);
    for (double s : {0.0, -1.0}) {
      Complex zz(s - std::abs(y), y);
      Complex uu(inv_sqrt2, (y >= 0.0 ? 1.0 : -1.0) * inv_sqrt2);
      worst = std::max(worst, std::abs(eval_f(zz + eps * uu, p).value -
                                       eval_f(zz - eps * uu, p).value));
    }
  }
  return {worst <= 100.0 * eps, "max two-sided jump / eps = " + fmt(worst / eps)};
}

// 5. Rotation inequalities: 1e4 sampled (z, m) pairs across A_2..A_10 pass
//    both bounds with non-negative margin.
Criterion criterion_rotation() {
  long tested = 0, failed = 0;
  double worst_margin = 1e9;
  for (int n = 2; n <= 10; ++n) {
    for (Complex z : sample_annulus(n, 1112, kSeed + 5 * n, true)) {
      RotationCheck rc = verify_rotation_lower(z, 0.5);
      ++tested;
      worst_margin = std::min(worst_margin, rc.lower_margin);
      if (!rc.pass) ++failed;
    }
  }
  return {failed == 0 && tested >= 10000,
          std::to_string(tested) + " pairs, min lower margin " + fmt(worst_margin)};
}

// 6. Sign-flip lemma: 1e3 samples per A_n cap {Re > 0}, n = 2..10, all
//    reach Re g^k <= 0 within k <= 1e3.
Criterion criterion_sign_flip() {
  long not_found = 0;
  long worst = -1;
  for (int n = 2; n <= 10; ++n) {
    for (Complex z : sample_annulus(n, 1000, kSeed + 6 * n, true)) {
      auto k = find_sign_flip(z, 0.5, 1000);
      if (!k)
        ++not_found;
      else
        worst = std::max(worst, *k);
    }
  }
  return {not_found == 0,
          std::to_string(not_found) + " misses, max flip index " + std::to_string(worst)};
}

// 7. Non-escape of the rings: 1e2 points per L(A_n), n = 2..10, all
//    RETURNING with >= 5 returns within budget 1e4.
Criterion criterion_rings() {
  MapSpec h{MapKind::PlanarH, {}};
  EscapePolicy policy{};
  long bad = 0;
  long min_returns = 1L << 40;
  for (int n = 2; n <= 10; ++n) {
    for (Complex w : sample_annulus(n, 100, kSeed + 7 * n)) {
      Extended u = eval_L(w);
      if (u.infinite) {
        ++bad;
        continue;
      }
      OrbitRecord rec = iterate(h, u.value, policy);
      min_returns = std::min(min_returns, rec.returns);
      if (rec.classification != OrbitClass::Returning || rec.returns < 5) ++bad;
    }
  }
  return {bad == 0, std::to_string(bad) + " violations, min returns " +
                        std::to_string(min_returns)};
}

// 8. Bounded component: 512x512 grid on a window containing z = 2 and all
//    of L(A_2); the dilated ESCAPING component containing 2 avoids the
//    boundary and every path from 2 to the boundary crosses RETURNING.
Criterion criterion_bounded_component() {
  MapSpec f{MapKind::PlanarF, {}};
  const long n = 512;
  const double cell = 4.0 / n;
  // dyadic window placing cell centers exactly on z = 2 and the real axis
  Window win{2.0 - cell * (n / 2) - cell / 2, 2.0 + cell * (n / 2) - cell / 2,
             -cell * (n / 2) - cell / 2, cell * (n / 2) - cell / 2};

  for (Complex w : sample_annulus(2, 1000, kSeed ^ 8)) {
    Extended u = eval_L(w);
    if (u.infinite || !win.contains(u.value))
      return {false, "window does not contain L(A_2)"};
  }

  EscapeGrid grid = escape_grid(f, win, n, n, EscapePolicy{}, 2);
  auto cell2 = grid.locate(Complex(2.0, 0.0));
  if (!cell2) return {false, "z = 2 outside the window"};
  if (grid.cell(cell2->first, cell2->second) != OrbitClass::Escaping)
    return {false, "cell containing 2 is not ESCAPING"};

  ComponentSet comps = label_components(grid, OrbitClass::Escaping, true);
  int comp = comps.component_of(grid, Complex(2.0, 0.0));
  if (comp < 0) return {false, "no closure component contains 2"};
  bool bounded = !comps.components[static_cast<size_t>(comp)].touches_window_boundary;
  bool separated = separated_from_boundary(grid, Complex(2.0, 0.0), OrbitClass::Returning);
  return {bounded && separated,
          std::string("component of 2 ") + (bounded ? "bounded" : "UNBOUNDED") +
              ", boundary paths " + (separated ? "blocked by RETURNING cells"
                                               : "NOT blocked")};
}

// 9. 3D involution and homogeneity at 1e-12 over 1e4 points; M(r)/r = e
//    within 1e-9 at r in {1, 10, 100}.
Criterion criterion_3d() {
  std::mt19937_64 rng(kSeed ^ 9);
  double worst_inv = 0.0, worst_hom = 0.0;
  for (int i = 0; i < 10000; ++i) {
    CylPoint3 p{uniform(rng, 0.05, 10.0), uniform(rng, -kPi + 1e-12, kPi),
                uniform(rng, -10.0, 10.0)};
    Vec3 back = cyl_to_cart(eval_f3d(eval_f3d(p, 1.0), 1.0));
    worst_inv = std::max(worst_inv, cart_distance(back, cyl_to_cart(p)));

    CylPoint3 dbl{2.0 * p.r, p.theta, 2.0 * p.x3};
    Vec3 a = cyl_to_cart(eval_f3d(dbl, 1.0));
    Vec3 b = cyl_to_cart(eval_f3d(p, 1.0));
    b.x *= 2.0;
    b.y *= 2.0;
    b.z *= 2.0;
    worst_hom = std::max(worst_hom, cart_distance(a, b));
  }
  MapSpec f3{MapKind::Cyl3D, {}};
  GrowthCurve curve = growth_ratio(f3, {1.0, 10.0, 100.0}, 512);
  double worst_ratio = 0.0;
  for (double r : curve.ratios) worst_ratio = std::max(worst_ratio, std::abs(r - std::exp(1.0)));
  bool ok = worst_inv < 1e-12 && worst_hom < 1e-12 && worst_ratio <= 1e-9;
  return {ok, "involution " + fmt(worst_inv) + ", homogeneity " + fmt(worst_hom) +
                  ", ratio deviation " + fmt(worst_ratio)};
}

// 10. Dilatation sanity: identity scans K <= 1 + 1e-6; finite differences
//     match the c = 0 oracle K ~ 3 at r = 0.5+ within 1e-3; 3D K is
//     r-independent within 1%.
Criterion criterion_dilatation() {
  MapSpec g{MapKind::PlanarG, {}};
  ScanSummary ident = scan_dilatation(g, Window{2.2, 5.0, 0.2, 1.0}, 2000, 1e-6, 2);
  bool ident_ok = ident.max_reliable_k <= 1.0 + 1e-6;

  MapSpec g0{MapKind::PlanarG, {0.0, 1e-3, 1.0}};
  double worst_oracle = 0.0;
  for (double t : {0.0, 0.9, 2.1, -1.3}) {
    BeltramiResult b = beltrami(g0, from_polar(0.5 + 2e-5, t), 1e-7);
    worst_oracle = std::max(worst_oracle, std::abs(b.k - 3.0));
  }
  bool oracle_ok = worst_oracle <= 1e-3;

  double kref = dilatation_3d(1.0, CylPoint3{0.5, 1.1, 0.3}, 1e-6).k;
  double worst_3d = 0.0;
  for (double r : {1.0, 2.0, 4.0}) {
    double k = dilatation_3d(1.0, CylPoint3{r, 1.1, 0.3}, 1e-6).k;
    worst_3d = std::max(worst_3d, std::abs(k - kref) / kref);
  }
  bool r_ok = worst_3d <= 0.01;

  return {ident_ok && oracle_ok && r_ok,
          "identity max K = " + fmt(ident.max_reliable_k) + ", |K-3| = " +
              fmt(worst_oracle) + ", 3D spread " + fmt(worst_3d)};
}

// 11. Growth of f: M(r)/r strictly increasing over {2, 2.5, 3} with final
//     ratio > 1e3.
Criterion criterion_growth() {
  MapSpec f{MapKind::PlanarF, {}};
  GrowthCurve curve = growth_ratio(f, {2.0, 2.5, 3.0}, 512);
  bool increasing = curve.ratios[0] < curve.ratios[1] && curve.ratios[1] < curve.ratios[2];
  bool large = curve.ratios[2] > 1e3;
  return {increasing && large, "ratios " + fmt(curve.ratios[0]) + " -> " +
                                   fmt(curve.ratios[1]) + " -> " + fmt(curve.ratios[2])};
}

// 12. Circle coverage: identity map covered exactly for L in (R, rho) and
//     not at all beyond; for f with R = 1, rho = 4 the measured maximal
//     fully-covered radius L* exceeds rho.
Criterion criterion_coverage() {
  MapSpec g{MapKind::PlanarG, {}};
  double frac_in = circle_coverage(g, 2.5, 4.0, 3.0, 64).fraction;
  double frac_out = circle_coverage(g, 2.5, 4.0, 5.0, 64).fraction;
  bool ident_ok = frac_in == 1.0 && frac_out == 0.0;

  MapSpec f{MapKind::PlanarF, {}};
  auto covered = [&](double L) { return circle_coverage(f, 1.0, 4.0, L, 64).fraction == 1.0; };
  double lstar = 0.0;
  double lo = 5.0;
  if (covered(lo)) {
    lstar = lo;
    double hi = lo;
    while (covered(hi * 1e4) && hi < 1e300) {
      hi *= 1e4;
      lstar = hi;
    }
    // log-space bisection between the last covered and first uncovered scale
    double lo_log = std::log(lstar), hi_log = std::log(lstar * 1e4);
    for (int i = 0; i < 8; ++i) {
      double mid = std::exp(0.5 * (lo_log + hi_log));
      if (covered(mid)) {
        lo_log = std::log(mid);
        lstar = mid;
      } else {
        hi_log = std::log(mid);
      }
    }
  }
  bool lstar_ok = lstar > 4.0;
  return {ident_ok && lstar_ok, "identity fractions " + fmt(frac_in) + "/" +
                                    fmt(frac_out) + ", measured L* = " + fmt(lstar)};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    std::function<Criterion()> fn;
  };
  std::vector<Entry> criteria = {
      {"integer-ray-identity", criterion_integer_ray},
      {"annulus-march", criterion_annulus_march},
      {"identity-sector", criterion_identity_sector},
      {"seam-continuity", criterion_seams},
      {"rotation-inequalities", criterion_rotation},
      {"sign-flip-lemma", criterion_sign_flip},
      {"non-escape-rings", criterion_rings},
      {"bounded-component", criterion_bounded_component},
      {"3d-involution-homogeneity", criterion_3d},
      {"dilatation-sanity", criterion_dilatation},
      {"growth-of-f", criterion_growth},
      {"circle-coverage", criterion_coverage},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Criterion result;
    try {
      result = criteria[i].fn();
    } catch (const std::exception& e) {
      result = {false, std::string("exception: ") + e.what()};
    }
    double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s criterion-%02zu %s: %s [%.1fs]\n", result.pass ? "PASS" : "FAIL",
                i + 1, criteria[i].name, result.detail.c_str(), secs);
    std::fflush(stdout);
    if (!result.pass) ++failures;
  }
  std::printf("%d/%zu acceptance criteria passed\n",
              static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures;
}

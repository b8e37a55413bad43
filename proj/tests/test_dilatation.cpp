#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "qrdyn/dilatation.hpp"
#include "qrdyn/maps.hpp"

using namespace qrdyn;

namespace {

// Symbolic oracle for the c = 0 second branch (r/(2-r) stretch): radial
// derivative 1/(2-r)^2 and tangential ratio 1/((2-r) r), so K = (2-r)/r.
double branch2_radial(double r) { return 1.0 / ((2.0 - r) * (2.0 - r)); }
double branch2_tangential(double r) { return 1.0 / ((2.0 - r) * r); }
double branch2_k(double r) { return (2.0 - r) / r; }

// Closed-form Cartesian Jacobian of the 3D map, assembled from the
// orthonormal cylindrical frames: the in-frame matrix is
// e^{lambda cos t} [[1, -lambda sin t], [0, 1]] (+) [1].
Jacobian3 f3d_jacobian_oracle(const CylPoint3& p, double lambda) {
  double s = std::exp(lambda * std::cos(p.theta));
  double frame[3][3] = {{s, -lambda * std::sin(p.theta) * s, 0.0},
                        {0.0, s, 0.0},
                        {0.0, 0.0, 1.0}};
  double ct = std::cos(p.theta), st = std::sin(p.theta);
  double to = p.theta > 0.0 ? p.theta - kPi : p.theta + kPi;
  double cto = std::cos(to), sto = std::sin(to);
  // input frame columns (e_r, e_t, e_z) and output frame at theta + pi
  double rin[3][3] = {{ct, -st, 0.0}, {st, ct, 0.0}, {0.0, 0.0, 1.0}};
  double rout[3][3] = {{cto, -sto, 0.0}, {sto, cto, 0.0}, {0.0, 0.0, 1.0}};
  Jacobian3 j{};
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double acc = 0.0;
      for (int i = 0; i < 3; ++i)
        for (int k = 0; k < 3; ++k) acc += rout[a][i] * frame[i][k] * rin[b][k];
      j[a * 3 + b] = acc;
    }
  return j;
}

// K of the 3D map from the frame singular values: scale e^{lambda cos t}
// cancels, leaving the shear [[1, -s], [0, 1]] with s = lambda sin t.
double f3d_k_oracle(double theta, double lambda) {
  double s = lambda * std::sin(theta);
  double disc = std::sqrt((2.0 + s * s) * (2.0 + s * s) - 4.0);
  double s1 = std::sqrt((2.0 + s * s + disc) / 2.0);
  double s3 = 1.0 / s1;  // det of the shear is 1
  return std::max(s1 * s1 * s1 / (s1 * 1.0 * s3), (s1 * 1.0 * s3) / (s3 * s3 * s3));
}

}  // namespace

TEST_CASE("jacobian_fd on the identity branch of g") {
  MapSpec g{MapKind::PlanarG, {}};
  bool reliable = true;
  Jacobian2 j = jacobian_fd(g, Complex(3.0, 0.5), 1e-6, &reliable);
  CHECK(reliable);
  CHECK(j[0] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(j[3] == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(std::abs(j[1]) <= 1e-9);
  CHECK(std::abs(j[2]) <= 1e-9);
}

TEST_CASE("jacobian_fd matches the branch-2 oracle at t = 0") {
  MapSpec g0{MapKind::PlanarG, {0.0, 1e-3, 1.0}};
  double r = 0.75;
  bool reliable = true;
  Jacobian2 j = jacobian_fd(g0, Complex(r, 0.0), 1e-7, &reliable);
  CHECK(reliable);
  // radial derivative = du/dx at t=0, tangential = dv/dy
  CHECK(j[0] == doctest::Approx(branch2_radial(r)).epsilon(1e-6));
  CHECK(j[3] == doctest::Approx(branch2_tangential(r)).epsilon(1e-6));
  CHECK(branch2_radial(r) == doctest::Approx(0.64).epsilon(1e-12));
  CHECK(branch2_tangential(r) == doctest::Approx(1.0667).epsilon(1e-4));
}

TEST_CASE("jacobian_fd flags seam proximity as unreliable") {
  MapSpec g{MapKind::PlanarG, {}};
  bool reliable = true;
  jacobian_fd(g, Complex(0.5 + 1e-9, 0.0), 1e-6, &reliable);
  CHECK_FALSE(reliable);
}

TEST_CASE("jacobian_fd_3d matches the symbolic oracle") {
  CylPoint3 p{1.0, 0.0, 0.0};
  Jacobian3 fd = jacobian_fd_3d(1.0, p, 1e-6);
  Jacobian3 oracle = f3d_jacobian_oracle(p, 1.0);
  for (int i = 0; i < 9; ++i) CHECK(fd[i] == doctest::Approx(oracle[i]).epsilon(1e-6).scale(1));

  CylPoint3 q{1.7, 0.9, -2.0};
  Jacobian3 fd2 = jacobian_fd_3d(0.6, q, 1e-6);
  Jacobian3 oracle2 = f3d_jacobian_oracle(q, 0.6);
  for (int i = 0; i < 9; ++i)
    CHECK(std::abs(fd2[i] - oracle2[i]) <= 1e-6 * std::max(1.0, std::abs(oracle2[i])));
}

TEST_CASE("beltrami: conformal cases give mu = 0, K = 1") {
  MapSpec g{MapKind::PlanarG, {}};
  BeltramiResult b = beltrami(g, Complex(3.0, 0.4), 1e-6);  // identity branch
  CHECK(b.mu_abs <= 1e-8);
  CHECK(b.k == doctest::Approx(1.0).epsilon(1e-7));

  MapSpec mob{MapKind::MobiusL, {}};
  BeltramiResult bl = beltrami(mob, Complex(0.3, 0.2), 1e-7);
  CHECK(bl.k == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("beltrami: K ~ 3 just beyond r = 1/2 for the c = 0 oracle") {
  MapSpec g0{MapKind::PlanarG, {0.0, 1e-3, 1.0}};
  double r = 0.5 + 2e-5;
  for (double t : {0.0, 0.4, 1.2, 3.0}) {
    BeltramiResult b = beltrami(g0, from_polar(r, t), 1e-7);
    CHECK(b.k == doctest::Approx(branch2_k(r)).epsilon(1e-6));
    CHECK(std::abs(b.k - 3.0) <= 1e-3);
  }
}

TEST_CASE("beltrami matches the oracle across the second branch") {
  MapSpec g0{MapKind::PlanarG, {0.0, 1e-3, 1.0}};
  for (double r : {0.55, 0.65, 0.8, 0.9}) {
    BeltramiResult b = beltrami(g0, from_polar(r, 0.7), 1e-7);
    CHECK(b.k == doctest::Approx(branch2_k(r)).epsilon(1e-5));
  }
}

TEST_CASE("beltrami K is continuous in c toward the c = 0 value") {
  double r = 0.7;
  Complex z = from_polar(r, 0.9);
  double k0 = branch2_k(r);
  double prev_gap = 1e9;
  for (double c : {0.2, 0.1, 0.05, 0.025}) {
    MapSpec g{MapKind::PlanarG, {c, 1e-3, 1.0}};
    double gap = std::abs(beltrami(g, z, 1e-7).k - k0);
    CHECK(gap < prev_gap);
    prev_gap = gap;
  }
  CHECK(prev_gap <= 0.05);
}

TEST_CASE("beltrami step-halving is Richardson-consistent") {
  MapSpec g{MapKind::PlanarG, {}};
  Complex z = from_polar(0.72, 0.5);
  double k1 = beltrami(g, z, 4e-6).k;
  double k2 = beltrami(g, z, 2e-6).k;
  double k3 = beltrami(g, z, 1e-6).k;
  double change1 = std::abs(k2 - k1);
  double change2 = std::abs(k3 - k2);
  CHECK(change2 < 4.0 * change1 + 1e-12);
}

TEST_CASE("conjugation leaves K unchanged (Mobius maps are conformal)") {
  MapSpec g{MapKind::PlanarG, {}};
  MapSpec h{MapKind::PlanarH, {}};
  for (double t : {0.5, 1.2, 2.2}) {
    Complex w = from_polar(0.68, t);
    Extended z = eval_L(w);
    REQUIRE_FALSE(z.infinite);
    double kg = beltrami(g, w, 1e-7).k;
    double kh = beltrami(h, z.value, 1e-7 * std::max(1.0, std::abs(z.value))).k;
    CHECK(std::abs(kg - kh) <= 1e-4);
  }
}

TEST_CASE("dilatation_3d: isometry limit and oracle values") {
  // small lambda: rotation by pi is nearly an isometry
  Dilatation3Report near_iso = dilatation_3d(1e-9, CylPoint3{1.0, 0.7, 0.3}, 1e-6);
  for (double sv : near_iso.singular_values) CHECK(sv == doctest::Approx(1.0).epsilon(1e-6));
  CHECK(near_iso.k == doctest::Approx(1.0).epsilon(1e-6));

  // K at (1, pi/2, 0) with lambda = 1: shear s = 1, K = golden ratio cubed
  Dilatation3Report rep = dilatation_3d(1.0, CylPoint3{1.0, kPi / 2.0, 0.0}, 1e-6);
  CHECK(rep.k == doctest::Approx(f3d_k_oracle(kPi / 2.0, 1.0)).epsilon(1e-6));
  double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  CHECK(rep.k == doctest::Approx(phi * phi * phi).epsilon(1e-6));
  CHECK(rep.singular_values[1] == doctest::Approx(std::exp(0.0)).epsilon(1e-6));

  // scale invariance in r
  for (double r : {0.5, 1.0, 2.0, 4.0}) {
    Dilatation3Report s = dilatation_3d(1.0, CylPoint3{r, kPi / 2.0, 0.0}, 1e-6);
    CHECK(std::abs(s.k - rep.k) <= 1e-6 * rep.k);
  }
}

TEST_CASE("dilatation_3d rejects the axis") {
  CHECK_THROWS_AS(dilatation_3d(1.0, CylPoint3{0.0, 0.0, 0.0}, 1e-6), std::domain_error);
}

TEST_CASE("degenerate Jacobians raise the orientation error") {
  // finite differences straddling the pole of L flip the numerical sign
  MapSpec L{MapKind::MobiusL, {}};
  CHECK_THROWS_AS(beltrami(L, Complex(1.0 + 5e-4, 0.0), 1e-3), OrientationError);
  // a step far wider than the exp sector's features does the same for f
  MapSpec f{MapKind::PlanarF, {}};
  CHECK_THROWS_AS(beltrami(f, Complex(-2.5, 0.1), 0.5), OrientationError);
}

TEST_CASE("3D involution: Jacobian product along p -> f(p) -> p is identity") {
  CylPoint3 p{1.3, 0.8, -0.4};
  Jacobian3 j1 = jacobian_fd_3d(1.0, p, 1e-6);
  Jacobian3 j2 = jacobian_fd_3d(1.0, eval_f3d(p, 1.0), 1e-6);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) {
      double acc = 0.0;
      for (int k = 0; k < 3; ++k) acc += j2[a * 3 + k] * j1[k * 3 + b];
      CHECK(std::abs(acc - (a == b ? 1.0 : 0.0)) <= 1e-5);
    }
}

TEST_CASE("scan_dilatation: identity region reports K = 1") {
  MapSpec g{MapKind::PlanarG, {}};
  ScanSummary s = scan_dilatation(g, Window{2.2, 5.0, 0.2, 1.0}, 500, 1e-6, 2);
  CHECK(s.evaluated == 500);
  CHECK(s.max_reliable_k <= 1.0 + 1e-6);
}

TEST_CASE("scan_dilatation: K decreases toward the c = 0 oracle as c -> 0") {
  Window win{-0.75, 0.75, -0.75, 0.75};
  // oracle: K <= 3 on the disk r <= 3/4 when c = 0 (branch 1 is conformal)
  double prev_excess = 1e9;
  for (double c : {0.2, 0.1, 0.05}) {
    MapSpec g{MapKind::PlanarG, {c, 1e-3, 1.0}};
    ScanSummary s = scan_dilatation(g, win, 1500, 1e-7, 2);
    CHECK(std::isfinite(s.max_reliable_k));
    double excess = s.max_reliable_k - 3.0;
    CHECK(excess < prev_excess);
    prev_excess = excess;
  }
  CHECK(prev_excess <= 0.5);
}

TEST_CASE("scan_dilatation: 3D K independent of r") {
  MapSpec f3{MapKind::Cyl3D, {0.5, 1e-3, 0.5}};
  // window read as (r, x3) ranges for the 3D map
  ScanSummary lo = scan_dilatation(f3, Window{0.5, 1.0, -1.0, 1.0}, 400, 1e-6, 2);
  ScanSummary hi = scan_dilatation(f3, Window{2.0, 4.0, -1.0, 1.0}, 400, 1e-6, 2);
  CHECK(std::abs(lo.max_reliable_k - hi.max_reliable_k) <=
        0.01 * std::max(lo.max_reliable_k, hi.max_reliable_k));
}

TEST_CASE("scan_dilatation excludes the oscillation zone and counts it") {
  MapSpec g{MapKind::PlanarG, {}};
  // thin ring straddling (1 - 1e-3, 1)
  ScanSummary s = scan_dilatation(g, Window{0.9985, 0.99999, -1e-4, 1e-4}, 200, 1e-9, 1);
  CHECK(s.excluded_oscillation > 0);
  CHECK(s.requested == 200);
}

TEST_CASE("scan results are deterministic and worker-independent") {
  MapSpec g{MapKind::PlanarG, {}};
  Window win{0.1, 0.45, 0.05, 0.4};
  ScanSummary a = scan_dilatation(g, win, 600, 1e-7, 1);
  ScanSummary b = scan_dilatation(g, win, 600, 1e-7, 3);
  REQUIRE(a.rows.size() == b.rows.size());
  CHECK(a.max_reliable_k == b.max_reliable_k);
  for (size_t i = 0; i < a.rows.size(); ++i) {
    CHECK(a.rows[i].z == b.rows[i].z);
    CHECK(a.rows[i].k == b.rows[i].k);
  }
}

TEST_CASE("default_fd_step has a floor") {
  CHECK(default_fd_step(0.0) == 1e-9);
  CHECK(default_fd_step(1.0) == 1e-6);
  CHECK(default_fd_step(100.0) == doctest::Approx(1e-4).epsilon(1e-12));
}

#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>

namespace qrdyn {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

// Principal argument in (-pi, pi]. std::arg returns [-pi, pi]; fold -pi to pi
// so branch selection is deterministic on the negative real axis.
inline double principal_arg(Complex z) {
  double t = std::arg(z);
  if (t == -kPi) t = kPi;
  return t;
}

struct PolarPoint {
  double r = 0.0;  // modulus >= 0
  double t = 0.0;  // principal argument in (-pi, pi]
};

inline PolarPoint to_polar(Complex z) { return {std::abs(z), principal_arg(z)}; }

inline Complex from_polar(double r, double t) {
  return Complex(r * std::cos(t), r * std::sin(t));
}
inline Complex from_polar(const PolarPoint& p) { return from_polar(p.r, p.t); }

// A point of the compactified plane: either a finite complex value or the
// point at infinity used by the Mobius maps.
struct Extended {
  Complex value{0.0, 0.0};
  bool infinite = false;

  static Extended at_infinity() { return Extended{Complex{}, true}; }
  static Extended finite(Complex z) { return Extended{z, false}; }
};

inline bool is_finite(Complex z) {
  return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// The ring 1 - 1/(n+1/4) < |z| < 1 - 1/(n+3/4), defined for n >= 2.
struct Annulus {
  int n;
  double rin;
  double rout;

  explicit Annulus(int index)
      : n(index),
        rin(1.0 - 1.0 / (index + 0.25)),
        rout(1.0 - 1.0 / (index + 0.75)) {
    if (index < 2) throw std::domain_error("annulus index must be >= 2");
  }

  // Membership with closed radii +- slack, absorbing rounding at boundaries.
  bool contains(double r, double slack = 1e-12) const {
    return r > rin - slack && r < rout + slack;
  }
  bool contains(Complex z, double slack = 1e-12) const {
    return contains(std::abs(z), slack);
  }
};

// Index m with z in A_m, or -1 when |z| lies in no annulus (slack 1e-12).
inline int annulus_index(double r, double slack = 1e-12) {
  if (!(r > 0.0) || r >= 1.0) return -1;
  double q = 1.0 / (1.0 - r);
  if (q > 1e9) return -1;  // keep the index in integer range
  int m = static_cast<int>(std::floor(q - 0.25));
  for (int cand = m - 1; cand <= m + 1; ++cand) {
    if (cand < 2) continue;
    if (Annulus(cand).contains(r, slack)) return cand;
  }
  return -1;
}
inline int annulus_index(Complex z, double slack = 1e-12) {
  return annulus_index(std::abs(z), slack);
}

// Cylindrical coordinates in R^3: r >= 0, theta in (-pi, pi].
struct CylPoint3 {
  double r = 0.0;
  double theta = 0.0;
  double x3 = 0.0;
};

struct Vec3 {
  double x = 0.0, y = 0.0, z = 0.0;
};

inline Vec3 cyl_to_cart(const CylPoint3& p) {
  return {p.r * std::cos(p.theta), p.r * std::sin(p.theta), p.x3};
}

inline CylPoint3 cart_to_cyl(const Vec3& v) {
  CylPoint3 p;
  p.r = std::hypot(v.x, v.y);
  p.theta = (p.r == 0.0) ? 0.0 : std::atan2(v.y, v.x);
  if (p.theta == -kPi) p.theta = kPi;
  p.x3 = v.z;
  return p;
}

inline double cart_distance(const Vec3& a, const Vec3& b) {
  return std::sqrt((a.x - b.x) * (a.x - b.x) + (a.y - b.y) * (a.y - b.y) +
                   (a.z - b.z) * (a.z - b.z));
}

// Parameters shared by the planar maps and the 3D example.
//   c      rotation amplitude of g (radians), c < pi/4
//   d      perturbation amplitude of the exp(z^4) sector
//   lambda radial stretch exponent of the 3D map
struct MapParams {
  double c = 0.5;
  double d = 1e-3;
  double lambda = 1.0;
};

enum class MapKind {
  PlanarG,
  MobiusL,
  MobiusLInv,
  PlanarH,
  PlanarF,
  Cyl3D,
};

struct MapSpec {
  MapKind kind = MapKind::PlanarF;
  MapParams params{};
};

inline bool is_planar(MapKind k) { return k != MapKind::Cyl3D; }

// Computational validity: c = 0 is admitted as the degenerate no-rotation
// map used by the dilatation oracles; the CLI enforces the strict 0 < c.
inline void validate_params(const MapParams& p) {
  if (!(p.c >= 0.0) || !(p.c < kPi / 4.0))
    throw std::invalid_argument("map parameter c must satisfy 0 <= c < pi/4");
  if (!(p.d > 0.0)) throw std::invalid_argument("map parameter d must be > 0");
  if (!(p.lambda > 0.0))
    throw std::invalid_argument("map parameter lambda must be > 0");
}

struct Window {
  double xmin = 0.0, xmax = 0.0, ymin = 0.0, ymax = 0.0;

  bool valid() const {
    return std::isfinite(xmin) && std::isfinite(xmax) && std::isfinite(ymin) &&
           std::isfinite(ymax) && xmin < xmax && ymin < ymax;
  }
  double width() const { return xmax - xmin; }
  double height() const { return ymax - ymin; }
  bool contains(Complex z) const {
    return z.real() >= xmin && z.real() <= xmax && z.imag() >= ymin &&
           z.imag() <= ymax;
  }
};

inline std::string map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::PlanarG: return "g";
    case MapKind::MobiusL: return "L";
    case MapKind::MobiusLInv: return "Linv";
    case MapKind::PlanarH: return "h";
    case MapKind::PlanarF: return "f";
    case MapKind::Cyl3D: return "f3d";
  }
  return "?";
}

}  // namespace qrdyn

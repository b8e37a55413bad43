#include "qrdyn/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace qrdyn {

namespace {

// a(r) without the domain check, clamped below at 0: near r = 1 the closed
// form can round to a negative subnormal of pi/4 - asin(...).
double a_raw(double r) {
  double a = kPi / 4.0 - std::asin(std::sqrt(2.0) / (2.0 * r));
  return a > 0.0 ? a : 0.0;
}

void check_c(double c) {
  if (!(c >= 0.0) || !(c < kPi / 4.0))
    throw std::invalid_argument("rotation amplitude c must be in [0, pi/4)");
}

void check_finite(Complex z, const char* who) {
  if (!is_finite(z)) throw std::domain_error(std::string(who) + ": non-finite input");
}

// Oscillation term (1-r)^2 |sin(pi/(1-r))| of the second branch.
double osc_term(double r) {
  double om = 1.0 - r;
  if (om <= 0.0) return 0.0;
  return om * om * sinpi_abs(1.0 / om);
}

// g in polar pieces, for callers that already split |z| and arg z.
// Assumes r > 0 and t in (-pi, pi].
Complex eval_g_polar(double r, double t, double c, Complex z_exact) {
  if (r < 0.5) {
    return from_polar((4.0 / 3.0) * r, t + c * std::abs(std::sin(t)));
  }
  if (r < 1.0) {
    double theta = t + c * std::abs(std::sin(t)) + c * osc_term(r);
    return from_polar(1.0 / (2.0 - r), theta);
  }
  if (r <= 2.0) {
    double a = a_raw(r);
    double at = std::abs(t);
    if (at > a) {
      double theta = t + c * (2.0 - r) * std::sin((at - a) / (kPi - a) * kPi);
      return from_polar(r, theta);
    }
    return z_exact;  // wedge |t| <= a(r): identity, returned unchanged
  }
  return z_exact;  // r > 2: identity, returned unchanged
}

// d * exp(z4) evaluated through a split magnitude channel. For moderate
// exponents the product is computed directly; beyond |Re z4| = 500 the
// magnitude is carried as a log offset and clamped at the saturation bound.
EvalResult scaled_exp(Complex z4, double amplitude) {
  double a = z4.real();
  double b = z4.imag();
  if (std::abs(a) <= 500.0) {
    return {amplitude * std::exp(Complex(a, b)), false};
  }
  double logmag = a + std::log(amplitude);
  if (logmag > 690.0) {
    return {Complex(kSaturationMagnitude * std::cos(b),
                    kSaturationMagnitude * std::sin(b)),
            true};
  }
  double mag = std::exp(logmag);  // underflows gracefully to 0 on the far side
  return {Complex(mag * std::cos(b), mag * std::sin(b)), false};
}

Complex pow4(Complex z) {
  Complex z2 = z * z;
  return z2 * z2;
}

// h on the ray Im z = 0, Re z > 1, through the algebraically simplified
// composition in the z chart: the pulled-back radius is 1 - 1/z, the
// composed stretch is exactly z+1 on the second branch, and the only
// rotation at t = 0 is the oscillation kick c (1-z^{-1})^2 |sin(pi z)|.
// Evaluating sin against z itself keeps the integer lattice exactly real,
// which is what makes the ray h(n+1) = n+2 stable under iteration.
Complex h_real_ray(double x, double c) {
  if (x < 2.0) {
    // pulled-back radius below 1/2: pure stretch, no rotation on the ray
    return Complex(3.0 * x / (4.0 - x), 0.0);
  }
  double invx = 1.0 / x;  // equals 1 - r for r = 1 - 1/x
  double tau = c * invx * invx * sinpi_abs(x);
  if (tau == 0.0) return Complex(x + 1.0, 0.0);
  double rho = x / (x + 1.0);
  double sh = std::sin(0.5 * tau);
  double re = 1.0 / (x + 1.0) + rho * 2.0 * sh * sh;  // 1 - rho cos(tau)
  double im = -rho * std::sin(tau);
  return 1.0 / Complex(re, im);
}

}  // namespace

double sinpi_abs(double q) {
  double f = q - std::nearbyint(q);
  return std::abs(std::sin(kPi * f));
}

double eval_a(double r) {
  if (!(r >= 1.0) || !(r <= 2.0))
    throw std::domain_error("eval_a: radius outside [1, 2]");
  return a_raw(r);
}

Complex eval_g(Complex z, double c) {
  check_c(c);
  check_finite(z, "eval_g");
  if (z == Complex(0.0, 0.0)) return z;
  PolarPoint p = to_polar(z);
  return eval_g_polar(p.r, p.t, c, z);
}

Extended eval_L(const Extended& z) {
  if (z.infinite) return Extended::finite(Complex(0.0, 0.0));
  if (z.value == Complex(1.0, 0.0)) return Extended::at_infinity();
  return Extended::finite(1.0 / (1.0 - z.value));
}

Extended eval_L_inv(const Extended& w) {
  if (w.infinite) return Extended::finite(Complex(1.0, 0.0));
  if (w.value == Complex(0.0, 0.0)) return Extended::at_infinity();
  return Extended::finite(1.0 - 1.0 / w.value);
}

Extended eval_L(Complex z) { return eval_L(Extended::finite(z)); }
Extended eval_L_inv(Complex w) { return eval_L_inv(Extended::finite(w)); }

Complex eval_h(Complex z, double c) {
  check_c(c);
  check_finite(z, "eval_h");
  // L^{-1}(0) is the point at infinity, where g acts as the identity.
  if (z == Complex(0.0, 0.0)) return z;
  if (z.imag() == 0.0 && z.real() > 1.0) return h_real_ray(z.real(), c);
  Complex w = 1.0 - 1.0 / z;
  double r = std::abs(w);
  double t = principal_arg(w);
  // g is the identity on {r > 2} and on the wedge |t| <= a(r); there
  // h = L o L^{-1} collapses exactly.
  if (r > 2.0) return z;
  if (r >= 1.0 && std::abs(t) <= a_raw(r)) return z;
  Complex gw = eval_g_polar(r, t, c, w);
  return 1.0 / (1.0 - gw);
}

Complex eval_phi(Complex z) {
  check_finite(z, "eval_phi");
  double s = z.real() + std::abs(z.imag());
  if (!(s > -1.0) || !(s < 0.0))
    throw std::domain_error("eval_phi: input outside the strip -1 < Re z + |Im z| < 0");
  return scaled_exp(pow4(z), -s).value * (-1.0);
}

EvalResult eval_f(Complex z, const MapParams& p) {
  check_finite(z, "eval_f");
  if (!(p.d > 0.0)) throw std::invalid_argument("eval_f: d must be > 0");
  double s = z.real() + std::abs(z.imag());
  if (s >= 0.0) return {eval_h(z, p.c), false};
  Complex z4 = pow4(z);
  // On the strip f = z - d phi(z) = z + d(-s) exp(z^4); at s = -1 the
  // amplitude is exactly d and the formula coincides with the left branch.
  double amp = (s <= -1.0) ? p.d : p.d * (-s);
  EvalResult e = scaled_exp(z4, amp);
  return {z + e.value, e.overflowed};
}

CylPoint3 eval_f3d(const CylPoint3& p, double lambda) {
  if (!(lambda > 0.0)) throw std::invalid_argument("eval_f3d: lambda must be > 0");
  if (!(p.r >= 0.0) || !std::isfinite(p.r) || !std::isfinite(p.theta) ||
      !std::isfinite(p.x3))
    throw std::domain_error("eval_f3d: invalid cylindrical point");
  if (p.r == 0.0) return p;  // the axis is fixed pointwise
  double nr = p.r * std::exp(lambda * std::cos(p.theta));
  double nt = p.theta > 0.0 ? p.theta - kPi : p.theta + kPi;
  return {nr, nt, p.x3};
}

Vec3 eval_f3d_cart(const Vec3& v, double lambda) {
  return cyl_to_cart(eval_f3d(cart_to_cyl(v), lambda));
}

EvalResult eval_map(const MapSpec& spec, Complex z) {
  switch (spec.kind) {
    case MapKind::PlanarG:
      return {eval_g(z, spec.params.c), false};
    case MapKind::MobiusL: {
      Extended e = eval_L(z);
      if (e.infinite)
        return {Complex(std::numeric_limits<double>::infinity(), 0.0), true};
      return {e.value, false};
    }
    case MapKind::MobiusLInv: {
      Extended e = eval_L_inv(z);
      if (e.infinite)
        return {Complex(std::numeric_limits<double>::infinity(), 0.0), true};
      return {e.value, false};
    }
    case MapKind::PlanarH:
      return {eval_h(z, spec.params.c), false};
    case MapKind::PlanarF:
      return eval_f(z, spec.params);
    case MapKind::Cyl3D:
      throw std::invalid_argument("eval_map: Cyl3D is not a planar map");
  }
  throw std::invalid_argument("eval_map: unknown map kind");
}

namespace {

double seam_distance_g(Complex z) {
  double r = std::abs(z);
  double d = std::abs(r - 0.5);
  d = std::min(d, std::abs(r - 1.0));
  d = std::min(d, std::abs(r - 2.0));
  if (r >= 1.0 && r <= 2.0) {
    double a = a_raw(r);
    d = std::min(d, r * std::abs(std::abs(principal_arg(z)) - a));
  }
  return d;
}

// Seams of h in the z chart: the g seams pulled back through L (scaled by
// the conformal factor |dz/dw| = |z|^2) plus the |sin t| kink on the real
// ray z > 1, whose preimage is the radial ray t = 0 inside the disk.
double seam_distance_h(Complex z) {
  double inf = std::numeric_limits<double>::infinity();
  if (z == Complex(0.0, 0.0)) return inf;  // identity near L^{-1}(0) = infinity
  Complex w = 1.0 - 1.0 / z;
  double zz = std::norm(z);
  double d = seam_distance_g(w) * zz;
  if (z.real() > 1.0) d = std::min(d, std::abs(z.imag()));
  return d;
}

double seam_distance_f(Complex z) {
  double s = z.real() + std::abs(z.imag());
  double d = std::min(std::abs(s), std::abs(s + 1.0)) / std::sqrt(2.0);
  if (s >= 0.0) {
    d = std::min(d, seam_distance_h(z));
  } else if (z.real() < 0.0) {
    d = std::min(d, std::abs(z.imag()));  // |Im z| kink of the exp sector
  }
  return d;
}

}  // namespace

double seam_distance(const MapSpec& spec, Complex z) {
  switch (spec.kind) {
    case MapKind::PlanarG: return seam_distance_g(z);
    case MapKind::PlanarH: return seam_distance_h(z);
    case MapKind::PlanarF: return seam_distance_f(z);
    case MapKind::MobiusL: return std::abs(z - Complex(1.0, 0.0));
    case MapKind::MobiusLInv: return std::abs(z);
    case MapKind::Cyl3D:
      throw std::invalid_argument("seam_distance: use dilatation_3d for Cyl3D");
  }
  return std::numeric_limits<double>::infinity();
}

bool in_oscillation_zone(const MapSpec& spec, Complex z) {
  auto in_zone = [](double r) { return r > 1.0 - 1e-3 && r < 1.0; };
  switch (spec.kind) {
    case MapKind::PlanarG:
      return in_zone(std::abs(z));
    case MapKind::PlanarH:
    case MapKind::PlanarF: {
      if (spec.kind == MapKind::PlanarF &&
          z.real() + std::abs(z.imag()) < 0.0)
        return false;
      if (z == Complex(0.0, 0.0)) return false;
      return in_zone(std::abs(1.0 - 1.0 / z));
    }
    default:
      return false;
  }
}

}  // namespace qrdyn

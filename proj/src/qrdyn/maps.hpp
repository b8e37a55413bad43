#pragma once

#include "qrdyn/geometry.hpp"

namespace qrdyn {

// Result of one planar map evaluation. `overflowed` marks values whose
// magnitude was clamped at the saturation bound instead of overflowing.
struct EvalResult {
  Complex value{};
  bool overflowed = false;
};

inline constexpr double kSaturationMagnitude = 1e300;

// Boundary angle a(r) = pi/4 - arcsin(sqrt(2)/(2r)) on [1,2]; the curve
// r e^{i a(r)} traces the segment Re z = 1 + Im z, 1 <= |z| <= 2.
double eval_a(double r);

// Five-branch stretch-and-rotate self-map of the plane. c in [0, pi/4).
Complex eval_g(Complex z, double c);

// Mobius map L(z) = 1/(1-z) and its inverse on the extended plane.
Extended eval_L(const Extended& z);
Extended eval_L_inv(const Extended& w);

// Shorthands for finite arguments with possibly infinite results.
Extended eval_L(Complex z);
Extended eval_L_inv(Complex w);

// Conjugated map h = L o g o L^{-1}, a quasiconformal self-map of the plane.
Complex eval_h(Complex z, double c);

// Interpolation bump phi(z) = (Re z + |Im z|) exp(z^4), defined on the strip
// -1 < Re z + |Im z| < 0; rejects inputs outside the strip.
Complex eval_phi(Complex z);

// Piecewise map f: h on {s >= 0}, z + d exp(z^4) on {s <= -1}, and the
// interpolation z - d phi(z) in between, where s = Re z + |Im z|.
EvalResult eval_f(Complex z, const MapParams& p);

// Cylindrical-coordinate map (r e^{i theta}, x3) -> (r e^{lambda cos theta
// + i(theta+pi)}, x3), fixing the axis r = 0. An involution.
CylPoint3 eval_f3d(const CylPoint3& p, double lambda);
Vec3 eval_f3d_cart(const Vec3& v, double lambda);

// Dispatch over the planar map kinds (Cyl3D rejected).
EvalResult eval_map(const MapSpec& spec, Complex z);

// |sin(pi q)| with the argument folded to the nearest integer first, so the
// oscillation term vanishes exactly on the lattice q in Z.
double sinpi_abs(double q);

// Distance from z to the nearest non-smooth seam of the map (infinity for
// the Mobius kinds away from their pole). Used to flag unreliable
// finite-difference samples.
double seam_distance(const MapSpec& spec, Complex z);

// True when the point falls in the radial zone (1-1e-3, 1) of g where
// sin(pi/(1-r)) oscillates faster than any fixed step resolves (pulled back
// through L for the conjugated maps).
bool in_oscillation_zone(const MapSpec& spec, Complex z);

}  // namespace qrdyn

#include "qrdyn/orbits.hpp"

#include <cmath>

namespace qrdyn {

const char* orbit_class_name(OrbitClass c) {
  switch (c) {
    case OrbitClass::Escaping: return "ESCAPING";
    case OrbitClass::Returning: return "RETURNING";
    case OrbitClass::Fixed: return "FIXED";
    case OrbitClass::Undetermined: return "UNDETERMINED";
  }
  return "?";
}

void validate_policy(const EscapePolicy& p) {
  if (!(p.escape_radius > 10.0))
    throw std::invalid_argument("escape_radius must be > 10");
  if (p.budget < 1) throw std::invalid_argument("budget must be >= 1");
  if (p.persistence < 1) throw std::invalid_argument("persistence must be >= 1");
}

OrbitRecord iterate(const MapSpec& spec, Complex z0, const EscapePolicy& policy) {
  validate_policy(policy);
  validate_params(spec.params);
  if (!is_planar(spec.kind))
    throw std::invalid_argument("iterate: orbits are defined for the planar maps");
  if (!is_finite(z0)) throw std::domain_error("iterate: non-finite start point");

  OrbitRecord rec;
  rec.start = z0;
  const bool track_sign_flip = (spec.kind == MapKind::PlanarG);

  Complex z = z0;
  bool exceeded_one = false;
  long dips = 0;
  int consecutive_above = 0;

  for (long k = 1; k <= policy.budget; ++k) {
    EvalResult step = eval_map(spec, z);
    rec.iterations_used = k;

    if (step.overflowed || !is_finite(step.value)) {
      rec.classification = OrbitClass::Escaping;
      rec.saturated = true;
      return rec;
    }

    Complex prev = z;
    z = step.value;

    if (k <= OrbitRecord::kStoreExact || k % OrbitRecord::kThinStride == 0) {
      rec.points.push_back(z);
      rec.point_index.push_back(k);
    }
    if (track_sign_flip && rec.sign_flip_index < 0 && z.real() <= 0.0)
      rec.sign_flip_index = k;

    double mod = std::abs(z);
    if (mod <= 1.0) {
      ++rec.returns;
      if (exceeded_one) ++dips;
    } else {
      exceeded_one = true;
    }

    if (mod > policy.escape_radius) {
      if (++consecutive_above >= policy.persistence) {
        rec.classification = OrbitClass::Escaping;
        return rec;
      }
    } else {
      consecutive_above = 0;
      // Fixed-point detection is suppressed beyond the escape radius: an
      // orbit stalled at huge modulus is escape at desk scale, not a fixed
      // point.
      if (std::abs(z - prev) < 1e-12) {
        rec.classification = OrbitClass::Fixed;
        return rec;
      }
    }

    if (dips >= policy.persistence) {
      rec.classification = OrbitClass::Returning;
      return rec;
    }
  }

  rec.classification = OrbitClass::Undetermined;
  return rec;
}

RotationCheck verify_rotation_lower(Complex z, double c) {
  validate_params(MapParams{c, 1e-3, 1.0});
  int m = annulus_index(z);
  if (m < 2)
    throw std::domain_error("verify_rotation_lower: point lies in no annulus A_m");
  double t = principal_arg(z);
  if (!(t > -kPi / 2.0) || !(t < kPi / 2.0))
    throw std::domain_error("verify_rotation_lower: arg z outside (-pi/2, pi/2)");

  RotationCheck out;
  out.annulus = m;
  out.t_in = t;
  Complex gz = eval_g(z, c);
  double t2 = principal_arg(gz);
  out.t_out = t2;

  if (t > 0.0) {
    out.lower_margin = t2 - (1.0 + 2.0 * c / kPi) * t;
    out.upper_margin = (t + 2.0 * c) - t2;
  } else {
    double cprime = 0.5 * c * std::sqrt(2.0);
    double bound = (1.0 - 2.0 * c / kPi) * t + cprime / ((m + 1.0) * (m + 1.0));
    out.lower_margin = t2 - bound;
    out.upper_margin = kPi / 2.0 - t2;
  }
  out.pass = out.lower_margin >= 0.0 && out.upper_margin > 0.0;
  return out;
}

std::optional<long> find_sign_flip(Complex z, double c, long k_max) {
  validate_params(MapParams{c, 1e-3, 1.0});
  if (k_max < 0) throw std::invalid_argument("find_sign_flip: negative budget");
  if (annulus_index(z) < 2)
    throw std::domain_error("find_sign_flip: point lies in no annulus A_n");
  if (z.real() <= 0.0) return 0;
  for (long k = 1; k <= k_max; ++k) {
    z = eval_g(z, c);
    if (z.real() <= 0.0) return k;
  }
  return std::nullopt;
}

long detect_returns(Complex z0, double c, long budget) {
  validate_params(MapParams{c, 1e-3, 1.0});
  if (budget < 0) throw std::invalid_argument("detect_returns: negative budget");
  Complex z = z0;
  long count = 0;
  for (long k = 1; k <= budget; ++k) {
    z = eval_h(z, c);
    if (!is_finite(z)) break;
    if (std::abs(z) <= 1.0) ++count;
  }
  return count;
}

double integer_ray_check(long n, long steps, const MapParams& params) {
  if (n < 2) throw std::domain_error("integer_ray_check: start integer must be >= 2");
  if (steps < 1) throw std::invalid_argument("integer_ray_check: steps must be >= 1");
  validate_params(params);
  Complex z(static_cast<double>(n), 0.0);
  double worst = 0.0;
  for (long k = 1; k <= steps; ++k) {
    z = eval_f(z, params).value;
    double dev = std::abs(z - Complex(static_cast<double>(n + k), 0.0));
    worst = std::max(worst, dev);
  }
  return worst;
}

}  // namespace qrdyn

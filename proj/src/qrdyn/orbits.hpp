#pragma once

#include <optional>
#include <vector>

#include "qrdyn/geometry.hpp"
#include "qrdyn/maps.hpp"

namespace qrdyn {

enum class OrbitClass {
  Escaping,
  Returning,
  Fixed,
  Undetermined,
};

const char* orbit_class_name(OrbitClass c);

// Finite-budget surrogate for escape to infinity.
//   escape_radius  modulus threshold, > 10
//   budget         maximum number of iterations, >= 1
//   persistence    consecutive above-threshold steps required for ESCAPING,
//                  and the number of unit-disk dips required for RETURNING
struct EscapePolicy {
  double escape_radius = 1e3;
  long budget = 10000;
  int persistence = 10;
};

void validate_policy(const EscapePolicy& p);

// One computed orbit. Iterates are stored exactly up to `kStoreExact` points
// and thinned to every 16th afterwards; classification always runs on the
// full stream.
struct OrbitRecord {
  static constexpr long kStoreExact = 1024;
  static constexpr long kThinStride = 16;

  Complex start{};
  std::vector<Complex> points;     // iterates z_1, z_2, ... (possibly thinned)
  std::vector<long> point_index;   // iteration index of each stored point
  OrbitClass classification = OrbitClass::Undetermined;
  long iterations_used = 0;
  long returns = 0;                // indices k >= 1 with |z_k| <= 1
  long sign_flip_index = -1;       // first k with Re z_k <= 0 (g orbits), else -1
  bool saturated = false;          // escape was forced by magnitude saturation
};

// Iterates the planar map from z0 until the classification resolves or the
// budget runs out. ESCAPING requires `persistence` consecutive iterates
// beyond the escape radius (saturation promotes immediately); RETURNING
// requires `persistence` dips into the closed unit disk after the orbit has
// exceeded modulus 1; FIXED fires on a step shorter than 1e-12 while the
// orbit is below the escape radius.
OrbitRecord iterate(const MapSpec& spec, Complex z0, const EscapePolicy& policy);

// Margins of the rotation inequalities for one application of g at a point
// of some annulus A_m in the half-plane |arg z| < pi/2:
//   t > 0:   t + 2c >= arg g(z) >= (1 + 2c/pi) t
//   t <= 0:  pi/2 > arg g(z) >= (1 - 2c/pi) t + c'/(m+1)^2,  c' = c sqrt(2)/2
struct RotationCheck {
  bool pass = false;
  int annulus = 0;
  double t_in = 0.0;
  double t_out = 0.0;
  double lower_margin = 0.0;
  double upper_margin = 0.0;
};

RotationCheck verify_rotation_lower(Complex z, double c);

// Smallest k <= k_max with Re g^k(z) <= 0 (k = 0 when the input itself has
// Re z <= 0), or nullopt when the budget runs out. Input must lie in some
// annulus A_n, n >= 2.
std::optional<long> find_sign_flip(Complex z, double c, long k_max);

// Iterates h for the full budget and counts indices with |h^k(z0)| <= 1.
long detect_returns(Complex z0, double c, long budget);

// Iterates f from the integer n >= 2 and returns max_k |f^k(n) - (n+k)|
// over k = 1..steps.
double integer_ray_check(long n, long steps, const MapParams& params = {});

}  // namespace qrdyn

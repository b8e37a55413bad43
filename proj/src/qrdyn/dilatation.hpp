#pragma once

#include <array>
#include <vector>

#include "qrdyn/geometry.hpp"
#include "qrdyn/maps.hpp"

namespace qrdyn {

// Raised when a finite-difference Jacobian is numerically degenerate or
// orientation-reversing (det <= 0).
struct OrientationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// 2x2 real Jacobian in row-major order: [du/dx du/dy; dv/dx dv/dy].
using Jacobian2 = std::array<double, 4>;
// 3x3 real Jacobian, row-major.
using Jacobian3 = std::array<double, 9>;

// Relative step with an absolute floor, the default scheme of the module.
double default_fd_step(double scale);

// Central-difference Jacobian of a planar map. `reliable` is cleared when
// the point sits within 10*step of a seam; the estimate is still returned.
Jacobian2 jacobian_fd(const MapSpec& spec, Complex z, double step, bool* reliable = nullptr);

// Central-difference Cartesian Jacobian of the 3D map at an off-axis point.
Jacobian3 jacobian_fd_3d(double lambda, const CylPoint3& p, double step, bool* reliable = nullptr);

struct BeltramiResult {
  double mu_abs = 0.0;   // |f_zbar / f_z| in [0, 1)
  double k = 1.0;        // (1 + |mu|)/(1 - |mu|)
  bool reliable = true;
};

// Beltrami modulus and dilatation from the finite-difference Jacobian.
// Throws OrientationError when det J <= 0.
BeltramiResult beltrami(const MapSpec& spec, Complex z, double step);

struct Dilatation3Report {
  std::array<double, 3> singular_values{};  // sigma_1 >= sigma_2 >= sigma_3
  double outer = 1.0;                       // sigma_1^3 / (sigma_1 sigma_2 sigma_3)
  double inner = 1.0;                       // (sigma_1 sigma_2 sigma_3) / sigma_3^3
  double k = 1.0;                           // max(outer, inner)
  bool reliable = true;
};

// Singular values and inner/outer dilatation of the 3D map. Rejects axis
// points (r = 0), where the map is not differentiable-sampled.
Dilatation3Report dilatation_3d(double lambda, const CylPoint3& p, double step);

struct ScanRow {
  Complex z{};                 // planar sample (or unused for 3D)
  CylPoint3 p{};               // 3D sample (or unused for planar)
  double step = 0.0;
  double mu_abs = 0.0;         // planar only
  std::array<double, 3> singular_values{};  // 3D only
  double k = 1.0;
  bool reliable = true;
};

struct ScanSummary {
  long requested = 0;
  long evaluated = 0;
  long unreliable = 0;
  long excluded_oscillation = 0;
  long orientation_failures = 0;
  double max_reliable_k = 1.0;
  // Histogram over K in the fixed bins [1,1.1), [1.1,1.5), [1.5,2), [2,3),
  // [3,5), [5,10), [10,inf) for reliable samples.
  std::array<long, 7> histogram{};
  std::vector<ScanRow> rows;
};

// Deterministic Halton-sequence scan of the dilatation over a region.
// Planar maps sample the window in Cartesian coordinates; the 3D map reads
// the window as (r, x3) ranges and draws theta from a third Halton channel.
// Seam neighbourhoods (within 10*step) are flagged unreliable, the
// oscillation zone of g is excluded and counted separately.
ScanSummary scan_dilatation(const MapSpec& spec, const Window& region, long samples,
                            double step, int workers = 1);

}  // namespace qrdyn

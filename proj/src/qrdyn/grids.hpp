#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qrdyn/geometry.hpp"
#include "qrdyn/orbits.hpp"

namespace qrdyn {

// Deterministic area-uniform sample of the annulus A_n; when
// `halfplane_re_positive` is set the arguments are drawn from (-pi/2, pi/2).
std::vector<Complex> sample_annulus(int n, long count, uint64_t seed,
                                    bool halfplane_re_positive = false);

// Raster classification of orbits over a window. Cells hold the
// classification and the iteration at which escape resolved (-1 otherwise).
struct EscapeGrid {
  Window window{};
  long nx = 0, ny = 0;
  MapSpec spec{};
  EscapePolicy policy{};
  std::vector<uint8_t> cells;   // OrbitClass per cell, row-major, row 0 at ymin
  std::vector<int32_t> iters;   // escape iteration or -1

  size_t index(long ix, long iy) const { return static_cast<size_t>(iy) * nx + ix; }
  OrbitClass cell(long ix, long iy) const {
    return static_cast<OrbitClass>(cells[index(ix, iy)]);
  }
  Complex center(long ix, long iy) const {
    return Complex(window.xmin + (ix + 0.5) * window.width() / nx,
                   window.ymin + (iy + 0.5) * window.height() / ny);
  }
  // Cell containing the point, or nullopt outside the window.
  std::optional<std::pair<long, long>> locate(Complex z) const;
};

// Classifies every cell center independently; tiles of rows are computed
// concurrently and the result is identical for any worker count.
EscapeGrid escape_grid(const MapSpec& spec, const Window& window, long nx, long ny,
                       const EscapePolicy& policy, int workers = 1);

struct ComponentReport {
  int label = 0;
  long cell_count = 0;
  long ix_min = 0, ix_max = 0, iy_min = 0, iy_max = 0;
  Window bounding_box{};
  bool touches_window_boundary = false;
};

struct ComponentSet {
  OrbitClass which = OrbitClass::Escaping;
  bool dilated = false;
  long nx = 0, ny = 0;
  std::vector<int32_t> labels;  // -1 outside the mask, component label otherwise
  std::vector<ComponentReport> components;

  // Component containing the grid cell of z, or -1 when z is outside the
  // window or its cell is not in the mask.
  int component_of(const EscapeGrid& grid, Complex z) const;
};

// 4-connectivity labeling of the cells with the given classification. With
// `dilate` set the mask is first grown by one cell (3x3 cross), the grid
// closure surrogate.
ComponentSet label_components(const EscapeGrid& grid, OrbitClass which, bool dilate);

// True when every 4-connected cell path from the cell containing `start` to
// the window boundary passes through a cell of `blocking` class.
bool separated_from_boundary(const EscapeGrid& grid, Complex start, OrbitClass blocking);

// Fixed color tables, bit-exact for fixed inputs:
//   P5: UNDETERMINED 0, FIXED 64, RETURNING 128, ESCAPING 255-(iter mod 64)
//   P6: same grays for non-escaping; escaping cells ramp with the iteration.
void write_grid_pgm(const EscapeGrid& grid, const std::string& path);
void write_grid_ppm(const EscapeGrid& grid, const std::string& path);

std::string components_csv(const ComponentSet& set);

// Max modulus over `samples` equispaced points of the circle |z| = r plus a
// golden-section refinement around the coarse argmax. For the 3D map the
// equatorial circle (x3 = 0) is sampled, matching the planar reading.
double max_modulus(const MapSpec& spec, double r, long samples);

struct GrowthCurve {
  std::vector<double> radii;
  std::vector<double> m_values;
  std::vector<double> ratios;
};

GrowthCurve growth_ratio(const MapSpec& spec, const std::vector<double>& radii,
                         long samples);
std::string growth_csv(const GrowthCurve& curve);

struct CoverageWitness {
  Complex target{};
  Complex preimage{};
  double residual = 0.0;
  bool found = false;
};

struct CoverageResult {
  double L = 0.0;
  double fraction = 0.0;
  long targets = 0;
  long hits = 0;
  std::vector<CoverageWitness> witnesses;
};

// For each of `targets` equispaced points y on |y| = L, searches the annulus
// R < |x| < rho for a preimage with |f(x) - y| < tol via a coarse polar scan
// plus Newton refinement locked to the smooth branch of the best candidates;
// hits are re-checked through the public evaluation. tol defaults to
// 1e-6 * max(1, L).
CoverageResult circle_coverage(const MapSpec& spec, double R, double rho, double L,
                               long targets, double tol = -1.0);
std::string coverage_csv(const CoverageResult& result);

}  // namespace qrdyn

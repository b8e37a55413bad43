#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "qrdyn/geometry.hpp"

namespace qrdyn {

struct VerifyCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  MapParams params{};
  uint64_t seed = 20260801;
  bool quick = false;  // reduced sample counts for interactive runs
  int workers = 1;
};

// Runs the named invariant suite: "maps", "orbits", "grids", or "all".
// Each check is independent; failures are reported, never thrown.
std::vector<VerifyCheck> run_verify(const std::string& suite, const VerifyOptions& opt);

}  // namespace qrdyn

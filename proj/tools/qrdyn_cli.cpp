// qrdyn command-line front end. Talks to the core exclusively through the
// C API in qrdyn.h; everything else here is configuration plumbing.
//
// Usage:
//   qrdyn <command> [--config FILE] [--key VALUE | --key=VALUE]...
//   qrdyn --config FILE            (command read from the config file)
//
// Commands: orbit, grid, components, dilatation, growth, coverage, verify.
// Config files are flat key=value documents; # starts a comment. Flags
// override config values. Exit codes: 0 success, 1 validation error,
// 2 computation error, 3 I/O error.

#include <cerrno>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "qrdyn.h"

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;

enum ExitCode { kOk = 0, kValidation = 1, kComputation = 2, kIo = 3 };

struct CliError {
  int code;
  std::string message;
};

[[noreturn]] void fail(int code, const std::string& message) {
  throw CliError{code, message};
}

[[noreturn]] void fail_status(qrdyn_status s, const std::string& context) {
  int code = kComputation;
  if (s == QRDYN_ERR_ARGUMENT || s == QRDYN_ERR_DOMAIN) code = kValidation;
  if (s == QRDYN_ERR_IO) code = kIo;
  fail(code, context + ": " + qrdyn_status_str(s) + " (" + qrdyn_last_error() + ")");
}

void check(qrdyn_status s, const std::string& context) {
  if (s != QRDYN_OK) fail_status(s, context);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

// ---- key/value store with provenance ---------------------------------------

struct KeyValues {
  std::map<std::string, std::string> values;
  std::string command;

  bool has(const std::string& key) const { return values.count(key) > 0; }
  void set_checked(const std::string& key, const std::string& value,
                   const std::string& where) {
    if (!values.emplace(key, value).second)
      fail(kValidation, "duplicate key '" + key + "' " + where);
  }
};

void load_config_file(const std::string& path, KeyValues& kv) {
  std::ifstream is(path);
  if (!is) fail(kIo, "cannot open config file: " + path);
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    size_t eq = stripped.find('=');
    if (eq == std::string::npos)
      fail(kValidation, path + ":" + std::to_string(lineno) + ": expected key=value");
    std::string key = trim(stripped.substr(0, eq));
    std::string value = trim(stripped.substr(eq + 1));
    if (key.empty())
      fail(kValidation, path + ":" + std::to_string(lineno) + ": empty key");
    if (key == "command") {
      if (!kv.command.empty() && kv.command != value)
        fail(kValidation, path + ":" + std::to_string(lineno) +
                              ": command '" + value +
                              "' conflicts with command-line command '" + kv.command + "'");
      kv.command = value;
      continue;
    }
    kv.set_checked(key, value, "at " + path + ":" + std::to_string(lineno));
  }
}

// ---- typed parameter access -------------------------------------------------

struct Params {
  KeyValues kv;
  std::map<std::string, std::string> consumed;  // echoed in the summary

  std::string take_string(const std::string& key, const std::string& def) {
    std::string v = kv.has(key) ? kv.values[key] : def;
    consumed[key] = v;
    kv.values.erase(key);
    return v;
  }

  double take_double(const std::string& key, double def) {
    if (!kv.has(key)) {
      consumed[key] = fmt(def);
      return def;
    }
    std::string raw = kv.values[key];
    kv.values.erase(key);
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(raw.c_str(), &end);
    if (errno != 0 || end == raw.c_str() || *end != '\0')
      fail(kValidation, "key '" + key + "': not a number: '" + raw + "'");
    consumed[key] = fmt(v);
    return v;
  }

  long take_long(const std::string& key, long def) {
    if (!kv.has(key)) {
      consumed[key] = std::to_string(def);
      return def;
    }
    std::string raw = kv.values[key];
    kv.values.erase(key);
    char* end = nullptr;
    errno = 0;
    long v = std::strtol(raw.c_str(), &end, 10);
    if (errno != 0 || end == raw.c_str() || *end != '\0')
      fail(kValidation, "key '" + key + "': not an integer: '" + raw + "'");
    consumed[key] = std::to_string(v);
    return v;
  }

  bool take_bool(const std::string& key, bool def) {
    long v = take_long(key, def ? 1 : 0);
    if (v != 0 && v != 1) fail(kValidation, "key '" + key + "': expected 0 or 1");
    return v == 1;
  }

  void reject_unknown() const {
    if (!kv.values.empty())
      fail(kValidation, "unknown key '" + kv.values.begin()->first + "'");
  }

  static std::string fmt(double v) {
    // shortest %g form that parses back to the same double
    std::string best;
    for (int prec = 1; prec <= 17; ++prec) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
      double back = 0.0;
      std::sscanf(buf, "%lf", &back);
      if (back == v && (best.empty() || std::strlen(buf) < best.size())) best = buf;
    }
    return best;
  }
};

// ---- shared option blocks ----------------------------------------------------

qrdyn_map_kind parse_map_kind(const std::string& name) {
  if (name == "g") return QRDYN_MAP_G;
  if (name == "L") return QRDYN_MAP_L;
  if (name == "Linv") return QRDYN_MAP_L_INV;
  if (name == "h") return QRDYN_MAP_H;
  if (name == "f") return QRDYN_MAP_F;
  if (name == "f3d") return QRDYN_MAP_CYL3D;
  fail(kValidation, "key 'map': unknown map '" + name + "' (g, L, Linv, h, f, f3d)");
}

qrdyn_map_spec take_map_spec(Params& p, const std::string& default_map) {
  qrdyn_map_spec spec = qrdyn_map_spec_default(QRDYN_MAP_F);
  spec.kind = parse_map_kind(p.take_string("map", default_map));
  spec.c = p.take_double("c", spec.c);
  spec.d = p.take_double("d", spec.d);
  spec.lambda = p.take_double("lambda", spec.lambda);
  if (!(spec.c > 0.0) || !(spec.c < kPi / 4.0))
    fail(kValidation, "key 'c': must satisfy 0 < c < pi/4");
  if (!(spec.d > 0.0)) fail(kValidation, "key 'd': must be > 0");
  if (!(spec.lambda > 0.0)) fail(kValidation, "key 'lambda': must be > 0");
  return spec;
}

qrdyn_escape_policy take_policy(Params& p) {
  qrdyn_escape_policy pol = qrdyn_escape_policy_default();
  pol.escape_radius = p.take_double("escape_radius", pol.escape_radius);
  pol.budget = p.take_long("budget", pol.budget);
  pol.persistence = static_cast<int>(p.take_long("persistence", pol.persistence));
  if (!(pol.escape_radius > 10.0)) fail(kValidation, "key 'escape_radius': must be > 10");
  if (pol.budget < 1) fail(kValidation, "key 'budget': must be >= 1");
  if (pol.persistence < 1) fail(kValidation, "key 'persistence': must be >= 1");
  return pol;
}

qrdyn_window take_window(Params& p, double xmin, double xmax, double ymin, double ymax) {
  qrdyn_window w;
  w.xmin = p.take_double("xmin", xmin);
  w.xmax = p.take_double("xmax", xmax);
  w.ymin = p.take_double("ymin", ymin);
  w.ymax = p.take_double("ymax", ymax);
  if (!(w.xmin < w.xmax) || !(w.ymin < w.ymax))
    fail(kValidation, "window keys: need xmin < xmax and ymin < ymax");
  return w;
}

int take_workers(Params& p) {
  long w = p.take_long("workers", 0);
  if (w < 0) fail(kValidation, "key 'workers': must be >= 0 (0 = machine parallelism)");
  if (w == 0) {
    unsigned hw = std::thread::hardware_concurrency();
    w = hw > 0 ? static_cast<long>(hw) : 1;
    p.consumed["workers"] = std::to_string(w);
  }
  return static_cast<int>(w);
}

// ---- output plumbing -----------------------------------------------------------

struct OutputSet {
  std::string out_dir;
  std::vector<std::string> written;

  std::string resolve(const std::string& name) const {
    if (name.empty() || name[0] == '/') return name;
    if (out_dir.empty()) return name;
    return out_dir + "/" + name;
  }
  void note(const std::string& path) { written.push_back(path); }
  void remove_partial() {
    for (const auto& p : written) std::remove(p.c_str());
  }
  std::string digest_summary() const {
    std::string out;
    for (const auto& p : written) {
      uint64_t d = 0;
      if (qrdyn_file_digest(p.c_str(), &d) != QRDYN_OK) continue;
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%016" PRIx64, d);
      if (!out.empty()) out += ",";
      out += p + ":fnv1a=" + buf;
    }
    return out.empty() ? "none" : out;
  }
};

std::string echo_params(const Params& p) {
  std::string out;
  for (const auto& [k, v] : p.consumed) {
    if (!out.empty()) out += " ";
    out += k + "=" + v;
  }
  return out;
}

// ---- commands -------------------------------------------------------------------

// Complex literal "re" or "re,im".
qrdyn_complex parse_complex(const std::string& key, const std::string& raw) {
  qrdyn_complex z{0.0, 0.0};
  std::string re = raw, im;
  size_t comma = raw.find(',');
  if (comma != std::string::npos) {
    re = trim(raw.substr(0, comma));
    im = trim(raw.substr(comma + 1));
  }
  char* end = nullptr;
  z.re = std::strtod(re.c_str(), &end);
  if (end == re.c_str() || *end != '\0')
    fail(kValidation, "key '" + key + "': not a complex literal: '" + raw + "'");
  if (!im.empty()) {
    z.im = std::strtod(im.c_str(), &end);
    if (end == im.c_str() || *end != '\0')
      fail(kValidation, "key '" + key + "': not a complex literal: '" + raw + "'");
  }
  return z;
}

int cmd_orbit(Params& p, OutputSet& outs) {
  qrdyn_map_spec spec = take_map_spec(p, "f");
  qrdyn_escape_policy policy = take_policy(p);
  qrdyn_complex z0_default{2.0, 0.0};
  std::string z0_raw = p.take_string("z0", "");
  if (!z0_raw.empty()) z0_default = parse_complex("z0", z0_raw);
  else p.consumed.erase("z0");
  double z0_re = p.take_double("z0_re", z0_default.re);
  double z0_im = p.take_double("z0_im", z0_default.im);
  long batch_annulus = p.take_long("batch_annulus", 0);
  long batch_count = p.take_long("batch_count", 100);
  bool batch_mobius = p.take_bool("batch_mobius", false);
  long seed = p.take_long("seed", 20260801);
  std::string out_csv = outs.resolve(p.take_string("out_csv", "orbit.csv"));
  p.reject_unknown();

  if (batch_annulus > 0) {
    if (batch_count < 1) fail(kValidation, "key 'batch_count': must be >= 1");
    std::vector<qrdyn_complex> pts(static_cast<size_t>(batch_count));
    check(qrdyn_sample_annulus(static_cast<int>(batch_annulus), batch_count,
                               static_cast<uint64_t>(seed), 0, pts.data()),
          "sample_annulus");
    if (batch_mobius) {
      for (auto& z : pts) {
        qrdyn_extended img;
        check(qrdyn_eval_L(qrdyn_extended{z.re, z.im, 0}, &img), "eval_L");
        if (img.at_infinity) fail(kComputation, "annulus sample mapped to infinity");
        z = {img.re, img.im};
      }
    }
    check(qrdyn_orbit_batch_csv(&spec, pts.data(), pts.size(), &policy, out_csv.c_str()),
          "orbit batch");
    outs.note(out_csv);
    std::printf("orbit ok %s outputs=%s\n", echo_params(p).c_str(),
                outs.digest_summary().c_str());
    return kOk;
  }

  qrdyn_orbit* orbit = nullptr;
  check(qrdyn_orbit_run(&spec, {z0_re, z0_im}, &policy, &orbit), "orbit run");
  std::unique_ptr<qrdyn_orbit, void (*)(qrdyn_orbit*)> guard(orbit, qrdyn_orbit_free);
  check(qrdyn_orbit_write_csv(orbit, out_csv.c_str()), "orbit csv");
  outs.note(out_csv);
  std::printf("orbit ok classification=%s iterations=%ld returns=%ld sign_flip=%ld %s outputs=%s\n",
              qrdyn_orbit_class_str(qrdyn_orbit_classification(orbit)),
              qrdyn_orbit_iterations(orbit), qrdyn_orbit_returns(orbit),
              qrdyn_orbit_sign_flip_index(orbit), echo_params(p).c_str(),
              outs.digest_summary().c_str());
  return kOk;
}

qrdyn_orbit_class parse_class(const std::string& name) {
  if (name == "escaping") return QRDYN_ORBIT_ESCAPING;
  if (name == "returning") return QRDYN_ORBIT_RETURNING;
  if (name == "fixed") return QRDYN_ORBIT_FIXED;
  if (name == "undetermined") return QRDYN_ORBIT_UNDETERMINED;
  fail(kValidation, "key 'components_class': unknown classification '" + name + "'");
}

int cmd_grid(Params& p, OutputSet& outs, bool images) {
  qrdyn_map_spec spec = take_map_spec(p, "f");
  qrdyn_escape_policy policy = take_policy(p);
  qrdyn_window win = take_window(p, -0.00390625, 3.99609375, -2.00390625, 1.99609375);
  long nx = p.take_long("nx", 512);
  long ny = p.take_long("ny", 512);
  int workers = take_workers(p);
  std::string components_class = p.take_string("components_class", "escaping");
  bool dilate = p.take_bool("components_dilate", true);
  std::string out_pgm = images ? p.take_string("out_pgm", "grid.pgm") : "";
  std::string out_ppm = images ? p.take_string("out_ppm", "") : "";
  std::string out_csv = p.take_string("out_components_csv", "components.csv");
  p.reject_unknown();
  if (nx < 2 || ny < 2) fail(kValidation, "keys 'nx','ny': must be >= 2");

  qrdyn_grid* grid = nullptr;
  check(qrdyn_grid_compute(&spec, win, nx, ny, &policy, workers, &grid), "grid");
  std::unique_ptr<qrdyn_grid, void (*)(qrdyn_grid*)> guard(grid, qrdyn_grid_free);

  if (!out_pgm.empty()) {
    std::string path = outs.resolve(out_pgm);
    check(qrdyn_grid_write_pgm(grid, path.c_str()), "grid pgm");
    outs.note(path);
  }
  if (!out_ppm.empty()) {
    std::string path = outs.resolve(out_ppm);
    check(qrdyn_grid_write_ppm(grid, path.c_str()), "grid ppm");
    outs.note(path);
  }

  qrdyn_components* comps = nullptr;
  check(qrdyn_grid_components(grid, parse_class(components_class), dilate ? 1 : 0, &comps),
        "components");
  std::unique_ptr<qrdyn_components, void (*)(qrdyn_components*)> cguard(
      comps, qrdyn_components_free);
  if (!out_csv.empty()) {
    std::string path = outs.resolve(out_csv);
    check(qrdyn_components_write_csv(comps, path.c_str()), "components csv");
    outs.note(path);
  }

  std::printf("%s ok components=%zu %s outputs=%s\n", images ? "grid" : "components",
              qrdyn_components_count(comps), echo_params(p).c_str(),
              outs.digest_summary().c_str());
  return kOk;
}

int cmd_dilatation(Params& p, OutputSet& outs) {
  qrdyn_map_spec spec = take_map_spec(p, "g");
  std::string mode = p.take_string("mode", "scan");
  double step = p.take_double("step", 1e-6);
  if (!(step > 0.0)) fail(kValidation, "key 'step': must be > 0");

  if (mode == "point") {
    if (spec.kind == QRDYN_MAP_CYL3D) {
      qrdyn_cyl3 pt;
      pt.r = p.take_double("r", 1.0);
      pt.theta = p.take_double("theta", 0.0);
      pt.x3 = p.take_double("x3", 0.0);
      p.reject_unknown();
      double sv[3], k;
      int reliable;
      check(qrdyn_dilatation_3d(spec.lambda, pt, step, sv, &k, &reliable), "dilatation");
      std::printf(
          "dilatation ok k=%.12g s1=%.12g s2=%.12g s3=%.12g reliable=%d %s outputs=none\n",
          k, sv[0], sv[1], sv[2], reliable, echo_params(p).c_str());
      return kOk;
    }
    double z_re = p.take_double("z_re", 0.75);
    double z_im = p.take_double("z_im", 0.0);
    p.reject_unknown();
    double mu, k;
    int reliable;
    check(qrdyn_beltrami(&spec, {z_re, z_im}, step, &mu, &k, &reliable), "beltrami");
    std::printf("dilatation ok k=%.12g mu_abs=%.12g reliable=%d %s outputs=none\n", k, mu,
                reliable, echo_params(p).c_str());
    return kOk;
  }
  if (mode != "scan") fail(kValidation, "key 'mode': expected 'point' or 'scan'");

  qrdyn_window win = take_window(p, -0.95, 0.95, -0.95, 0.95);
  long samples = p.take_long("samples", 2000);
  int workers = take_workers(p);
  std::string out_csv = p.take_string("out_csv", "dilatation.csv");
  p.reject_unknown();
  if (samples < 1) fail(kValidation, "key 'samples': must be >= 1");

  qrdyn_scan* scan = nullptr;
  check(qrdyn_scan_dilatation(&spec, win, samples, step, workers, &scan), "scan");
  std::unique_ptr<qrdyn_scan, void (*)(qrdyn_scan*)> guard(scan, qrdyn_scan_free);
  if (!out_csv.empty()) {
    std::string path = outs.resolve(out_csv);
    check(qrdyn_scan_write_csv(scan, path.c_str()), "scan csv");
    outs.note(path);
  }
  std::printf(
      "dilatation ok max_k=%.12g evaluated=%ld unreliable=%ld excluded=%ld %s outputs=%s\n",
      qrdyn_scan_max_k(scan), qrdyn_scan_evaluated(scan), qrdyn_scan_unreliable(scan),
      qrdyn_scan_excluded(scan), echo_params(p).c_str(), outs.digest_summary().c_str());
  return kOk;
}

int cmd_growth(Params& p, OutputSet& outs) {
  qrdyn_map_spec spec = take_map_spec(p, "f");
  std::string radii_raw = p.take_string("radii", "2,2.5,3");
  long samples = p.take_long("samples", 512);
  std::string out_csv = p.take_string("out_csv", "growth.csv");
  p.reject_unknown();
  if (samples < 16) fail(kValidation, "key 'samples': must be >= 16");

  std::vector<double> radii;
  std::stringstream ss(radii_raw);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    char* end = nullptr;
    double r = std::strtod(item.c_str(), &end);
    if (end == item.c_str() || *end != '\0')
      fail(kValidation, "key 'radii': not a number: '" + item + "'");
    radii.push_back(r);
  }
  if (radii.empty()) fail(kValidation, "key 'radii': empty list");

  qrdyn_growth* curve = nullptr;
  check(qrdyn_growth_curve(&spec, radii.data(), radii.size(), samples, &curve), "growth");
  std::unique_ptr<qrdyn_growth, void (*)(qrdyn_growth*)> guard(curve, qrdyn_growth_free);
  std::string path = outs.resolve(out_csv);
  check(qrdyn_growth_write_csv(curve, path.c_str()), "growth csv");
  outs.note(path);
  double r_last, m_last, ratio_last;
  check(qrdyn_growth_point(curve, radii.size() - 1, &r_last, &m_last, &ratio_last),
        "growth point");
  std::printf("growth ok last_ratio=%.12g %s outputs=%s\n", ratio_last,
              echo_params(p).c_str(), outs.digest_summary().c_str());
  return kOk;
}

int cmd_coverage(Params& p, OutputSet& outs) {
  qrdyn_map_spec spec = take_map_spec(p, "f");
  double R = p.take_double("R", 1.0);
  double rho = p.take_double("rho", 4.0);
  double L = p.take_double("L", 5.0);
  long targets = p.take_long("targets", 64);
  double tol = p.take_double("tol", 0.0);
  std::string out_csv = p.take_string("out_csv", "coverage.csv");
  p.reject_unknown();
  if (!(R >= 0.0) || !(R < rho)) fail(kValidation, "keys 'R','rho': need 0 <= R < rho");
  if (!(L > 0.0)) fail(kValidation, "key 'L': must be > 0");
  if (targets < 1) fail(kValidation, "key 'targets': must be >= 1");

  qrdyn_coverage* cov = nullptr;
  check(qrdyn_circle_coverage(&spec, R, rho, L, targets, tol, &cov), "coverage");
  std::unique_ptr<qrdyn_coverage, void (*)(qrdyn_coverage*)> guard(cov,
                                                                   qrdyn_coverage_free);
  std::string path = outs.resolve(out_csv);
  check(qrdyn_coverage_write_csv(cov, path.c_str()), "coverage csv");
  outs.note(path);
  std::printf("coverage ok fraction=%.12g hits=%ld %s outputs=%s\n",
              qrdyn_coverage_fraction(cov), qrdyn_coverage_hits(cov),
              echo_params(p).c_str(), outs.digest_summary().c_str());
  return kOk;
}

int cmd_verify(Params& p, OutputSet& outs) {
  qrdyn_map_spec spec = take_map_spec(p, "f");
  std::string suite = p.take_string("suite", "all");
  bool quick = p.take_bool("quick", false);
  long seed = p.take_long("seed", 20260801);
  int workers = take_workers(p);
  p.reject_unknown();

  qrdyn_verify* report = nullptr;
  check(qrdyn_verify_run(suite.c_str(), &spec, static_cast<uint64_t>(seed),
                         quick ? 1 : 0, workers, &report),
        "verify");
  std::unique_ptr<qrdyn_verify, void (*)(qrdyn_verify*)> guard(report, qrdyn_verify_free);

  size_t count = qrdyn_verify_count(report);
  size_t failed = 0;
  for (size_t i = 0; i < count; ++i) {
    const char* name = nullptr;
    const char* detail = nullptr;
    int pass = 0;
    check(qrdyn_verify_item(report, i, &name, &pass, &detail), "verify item");
    std::printf("%s %s: %s\n", pass ? "PASS" : "FAIL", name, detail);
    if (!pass) ++failed;
  }
  std::printf("verify %s checks=%zu failed=%zu %s outputs=%s\n",
              failed == 0 ? "ok" : "FAILED", count, failed, echo_params(p).c_str(),
              outs.digest_summary().c_str());
  return failed == 0 ? kOk : kComputation;
}

int dispatch(const std::string& command, Params& p, OutputSet& outs) {
  if (command == "orbit") return cmd_orbit(p, outs);
  if (command == "grid") return cmd_grid(p, outs, true);
  if (command == "components") return cmd_grid(p, outs, false);
  if (command == "dilatation") return cmd_dilatation(p, outs);
  if (command == "growth") return cmd_growth(p, outs);
  if (command == "coverage") return cmd_coverage(p, outs);
  if (command == "verify") return cmd_verify(p, outs);
  fail(kValidation, "unknown command '" + command +
                        "' (orbit, grid, components, dilatation, growth, coverage, verify)");
}

void usage() {
  std::fprintf(stderr,
               "usage: qrdyn <command> [--config FILE] [--key VALUE]...\n"
               "       qrdyn --config FILE\n"
               "commands: orbit grid components dilatation growth coverage verify\n");
}

}  // namespace

int main(int argc, char** argv) {
  KeyValues kv;
  std::string config_path;
  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    if (args.empty()) {
      usage();
      return kValidation;
    }

    size_t i = 0;
    if (args[0].rfind("--", 0) != 0) {
      kv.command = args[0];
      i = 1;
    }

    // flags, collected first so they can override the config
    std::map<std::string, std::string> flags;
    for (; i < args.size(); ++i) {
      std::string arg = args[i];
      if (arg.rfind("--", 0) != 0)
        fail(kValidation, "expected --key VALUE, got '" + arg + "'");
      std::string key = arg.substr(2), value;
      size_t eq = key.find('=');
      if (eq != std::string::npos) {
        value = key.substr(eq + 1);
        key = key.substr(0, eq);
      } else {
        if (i + 1 >= args.size()) fail(kValidation, "flag '--" + key + "' needs a value");
        value = args[++i];
      }
      if (key.empty()) fail(kValidation, "empty flag name");
      if (key == "config") {
        if (!config_path.empty()) fail(kValidation, "duplicate --config");
        config_path = value;
        continue;
      }
      if (key == "command") {
        if (!kv.command.empty() && kv.command != value)
          fail(kValidation, "--command conflicts with positional command");
        kv.command = value;
        continue;
      }
      if (!flags.emplace(key, value).second)
        fail(kValidation, "duplicate flag '--" + key + "'");
    }

    if (!config_path.empty()) load_config_file(config_path, kv);
    for (const auto& [k, v] : flags) kv.values[k] = v;  // flags override config

    if (kv.command.empty()) fail(kValidation, "no command given");

    Params params;
    params.kv = kv;

    OutputSet outs;
    // the only environment influence: output directory override
    if (const char* env = std::getenv("QRDYN_OUT_DIR"); env && *env) {
      outs.out_dir = env;
      params.take_string("out_dir", "");  // still a known key when env overrides
      params.consumed["out_dir"] = outs.out_dir;
    } else {
      outs.out_dir = params.take_string("out_dir", "");
      if (outs.out_dir.empty()) params.consumed.erase("out_dir");
    }

    try {
      return dispatch(kv.command, params, outs);
    } catch (const CliError&) {
      outs.remove_partial();
      throw;
    } catch (const std::exception& e) {
      outs.remove_partial();
      std::fprintf(stderr, "error: %s\n", e.what());
      return kComputation;
    }
  } catch (const CliError& e) {
    std::fprintf(stderr, "error: %s\n", e.message.c_str());
    return e.code;
  }
}

// Integration tests driving the installed CLI binary. The binary path
// arrives via QRDYN_CLI_BIN (set by ctest); runs happen in a scratch
// directory so declared outputs can be inspected and cleaned.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/stat.h>
#include <sys/wait.h>
#include <vector>

namespace {

std::string cli_bin() {
  const char* env = std::getenv("QRDYN_CLI_BIN");
  REQUIRE_MESSAGE(env != nullptr, "QRDYN_CLI_BIN not set");
  return env;
}

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

int counter = 0;

RunResult run_cli(const std::string& args, const std::string& extra_env = "") {
  std::string out_file = "cli_stdout_" + std::to_string(counter) + ".txt";
  std::string err_file = "cli_stderr_" + std::to_string(counter) + ".txt";
  ++counter;
  std::string cmd = extra_env + cli_bin() + " " + args + " > " + out_file + " 2> " +
                    err_file;
  int rc = std::system(cmd.c_str());
  RunResult res;
  res.exit_code = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  auto slurp = [](const std::string& p) {
    std::ifstream is(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(is),
                       std::istreambuf_iterator<char>());
  };
  res.out = slurp(out_file);
  res.err = slurp(err_file);
  std::remove(out_file.c_str());
  std::remove(err_file.c_str());
  return res;
}

void write_file(const std::string& path, const std::string& body) {
  std::ofstream os(path);
  REQUIRE(os.good());
  os << body;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  REQUIRE_MESSAGE(is.good(), ("missing file: " + path).c_str());
  return std::string(std::istreambuf_iterator<char>(is),
                     std::istreambuf_iterator<char>());
}

bool exists(const std::string& path) {
  struct stat st;
  return stat(path.c_str(), &st) == 0;
}

std::string digest_of(const std::string& summary, const std::string& file) {
  size_t pos = summary.find(file + ":fnv1a=");
  REQUIRE(pos != std::string::npos);
  return summary.substr(pos, file.size() + 7 + 16);
}

}  // namespace

TEST_CASE("minimal orbit config materializes defaults and the ray CSV") {
  write_file("orbit_min.cfg",
             "# minimal run\n"
             "command = orbit\n"
             "map = f\n"
             "z0_re = 2\n");
  RunResult r = run_cli("--config orbit_min.cfg --out_csv orbit_min.csv");
  CHECK(r.exit_code == 0);
  // defaults echoed in the summary
  CHECK(r.out.find("c=0.5") != std::string::npos);
  CHECK(r.out.find("d=0.001") != std::string::npos);
  CHECK(r.out.find("escape_radius=1000") != std::string::npos);
  CHECK(r.out.find("budget=10000") != std::string::npos);
  CHECK(r.out.find("persistence=10") != std::string::npos);
  CHECK(r.out.find("classification=ESCAPING") != std::string::npos);

  // the k-th modulus along the ray is k + 2
  std::string csv = slurp("orbit_min.csv");
  std::istringstream is(csv);
  std::string line;
  std::getline(is, line);
  CHECK(line == "k,re,im,modulus");
  for (int k = 0; k <= 20; ++k) {
    REQUIRE(std::getline(is, line));
    std::ostringstream expect;
    expect << k << "," << (k + 2) << ",0," << (k + 2);
    CHECK(line == expect.str());
  }
  std::remove("orbit_min.cfg");
  std::remove("orbit_min.csv");
}

TEST_CASE("validation: c >= pi/4 rejected, duplicate keys, unknown keys") {
  write_file("bad_c.cfg", "command = orbit\nmap = f\nz0_re = 2\nc = 1.0\n");
  RunResult r = run_cli("--config bad_c.cfg");
  CHECK(r.exit_code == 1);
  CHECK(r.err.find("'c'") != std::string::npos);
  std::remove("bad_c.cfg");

  write_file("dup.cfg", "command = orbit\nz0_re = 2\nz0_re = 3\n");
  RunResult dup = run_cli("--config dup.cfg");
  CHECK(dup.exit_code == 1);
  CHECK(dup.err.find("duplicate key 'z0_re'") != std::string::npos);
  CHECK(dup.err.find(":3") != std::string::npos);  // line number of the repeat
  std::remove("dup.cfg");

  write_file("unknown.cfg", "command = orbit\nz0_re = 2\nwibble = 4\n");
  RunResult unk = run_cli("--config unknown.cfg");
  CHECK(unk.exit_code == 1);
  CHECK(unk.err.find("unknown key 'wibble'") != std::string::npos);
  std::remove("unknown.cfg");

  write_file("noeq.cfg", "command = orbit\njust a line\n");
  RunResult noeq = run_cli("--config noeq.cfg");
  CHECK(noeq.exit_code == 1);
  CHECK(noeq.err.find(":2") != std::string::npos);
  std::remove("noeq.cfg");

  RunResult badcmd = run_cli("transmogrify");
  CHECK(badcmd.exit_code == 1);
  CHECK(badcmd.err.find("unknown command") != std::string::npos);
}

TEST_CASE("flags override config values") {
  write_file("override.cfg", "command = orbit\nmap = f\nz0_re = 2\nc = 0.5\n");
  RunResult r = run_cli("--config override.cfg --c 0.3 --out_csv override.csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("c=0.3") != std::string::npos);
  std::remove("override.cfg");
  std::remove("override.csv");
}

TEST_CASE("orbit accepts a complex z0 literal") {
  write_file("z0.cfg", "command = orbit\nmap = f\nz0 = 2\n");
  RunResult r = run_cli("--config z0.cfg --out_csv z0a.csv");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("classification=ESCAPING") != std::string::npos);
  CHECK(r.out.find("z0_re=2") != std::string::npos);
  std::remove("z0.cfg");
  std::remove("z0a.csv");

  RunResult r2 = run_cli("orbit --map h --z0 -1,-1 --out_csv z0b.csv");
  CHECK(r2.exit_code == 0);
  CHECK(r2.out.find("classification=FIXED") != std::string::npos);
  std::remove("z0b.csv");

  RunResult bad = run_cli("orbit --map f --z0 goop");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("'z0'") != std::string::npos);
}

TEST_CASE("grid command produces a P5 image and components CSV, reproducibly") {
  std::string args =
      "grid --map f --xmin 1.5 --xmax 2.5 --ymin -0.5 --ymax 0.5 "
      "--nx 48 --ny 48 --out_pgm grid_a.pgm --out_components_csv comp_a.csv";
  RunResult r1 = run_cli(args + " --workers 1");
  CHECK(r1.exit_code == 0);
  REQUIRE(exists("grid_a.pgm"));
  REQUIRE(exists("comp_a.csv"));
  CHECK(slurp("grid_a.pgm").rfind("P5\n48 48\n255\n", 0) == 0);
  std::string d1 = digest_of(r1.out, "grid_a.pgm");

  RunResult r2 = run_cli(
      "grid --map f --xmin 1.5 --xmax 2.5 --ymin -0.5 --ymax 0.5 "
      "--nx 48 --ny 48 --out_pgm grid_b.pgm --out_components_csv comp_b.csv "
      "--workers 2");
  CHECK(r2.exit_code == 0);
  std::string d2 = digest_of(r2.out, "grid_b.pgm");
  // digests identical for identical inputs regardless of worker count
  CHECK(d1.substr(d1.find("fnv1a=")) == d2.substr(d2.find("fnv1a=")));
  CHECK(slurp("comp_a.csv") == slurp("comp_b.csv"));
  for (const char* f : {"grid_a.pgm", "grid_b.pgm", "comp_a.csv", "comp_b.csv"})
    std::remove(f);
}

TEST_CASE("components, dilatation, growth, coverage commands run") {
  RunResult comp = run_cli(
      "components --map h --xmin -5.2 --xmax -4.8 --ymin -0.2 --ymax 0.2 "
      "--nx 16 --ny 16 --components_class fixed --components_dilate 0 "
      "--out_components_csv comp_h.csv");
  CHECK(comp.exit_code == 0);
  CHECK(comp.out.find("components=1") != std::string::npos);
  std::remove("comp_h.csv");

  RunResult dpt = run_cli("dilatation --map g --mode point --z_re 3 --z_im 0.5");
  CHECK(dpt.exit_code == 0);
  CHECK(dpt.out.find("k=1") != std::string::npos);

  RunResult dscan = run_cli(
      "dilatation --map g --mode scan --xmin 2.2 --xmax 5 --ymin 0.2 --ymax 1 "
      "--samples 200 --out_csv scan.csv");
  CHECK(dscan.exit_code == 0);
  CHECK(exists("scan.csv"));
  std::remove("scan.csv");

  RunResult gr = run_cli("growth --map f --radii 2,2.5,3 --samples 256 --out_csv gr.csv");
  CHECK(gr.exit_code == 0);
  std::string csv = slurp("gr.csv");
  CHECK(csv.find("r,max_modulus,ratio") == 0);
  std::remove("gr.csv");

  RunResult cov = run_cli(
      "coverage --map g --R 2.5 --rho 4 --L 3 --targets 16 --out_csv cov.csv");
  CHECK(cov.exit_code == 0);
  CHECK(cov.out.find("fraction=1") != std::string::npos);
  std::remove("cov.csv");
}

TEST_CASE("3d dilatation point mode") {
  RunResult r = run_cli(
      "dilatation --map f3d --mode point --r 1 --theta 1.5707963267948966 --x3 0");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("k=4.236") != std::string::npos);
}

TEST_CASE("verify command prints per-invariant lines") {
  RunResult r = run_cli("verify --suite maps --quick 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("PASS maps/gid-sector-identity") != std::string::npos);
  CHECK(r.out.find("FAIL") == std::string::npos);
}

TEST_CASE("io failure exits 3 and cleans partial outputs") {
  RunResult r = run_cli("orbit --map f --z0_re 2 --out_csv /nonexistent_zzz/x.csv");
  CHECK(r.exit_code == 3);
}

TEST_CASE("computation domain errors exit nonzero without outputs") {
  // batch sampling from an invalid annulus index
  RunResult r = run_cli("orbit --map h --batch_annulus 1 --out_csv nope.csv");
  CHECK(r.exit_code != 0);
  CHECK_FALSE(exists("nope.csv"));
}

TEST_CASE("QRDYN_OUT_DIR overrides the output directory") {
  REQUIRE(std::system("mkdir -p cli_outdir_test") == 0);
  RunResult r = run_cli("orbit --map f --z0_re 2 --out_csv ray.csv",
                        "QRDYN_OUT_DIR=cli_outdir_test ");
  CHECK(r.exit_code == 0);
  CHECK(exists("cli_outdir_test/ray.csv"));
  std::remove("cli_outdir_test/ray.csv");
  std::remove("cli_outdir_test");
}

TEST_CASE("batch orbit over a Mobius ring") {
  RunResult r = run_cli(
      "orbit --map h --batch_annulus 3 --batch_count 20 --batch_mobius 1 "
      "--seed 5 --out_csv ring.csv");
  CHECK(r.exit_code == 0);
  std::string csv = slurp("ring.csv");
  size_t lines = 0;
  for (char ch : csv)
    if (ch == '\n') ++lines;
  CHECK(lines == 21);
  CHECK(csv.find("ESCAPING") == std::string::npos);
  CHECK(csv.find("RETURNING") != std::string::npos);
  std::remove("ring.csv");
}

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

const fs::path& scratch_root() {
  static fs::path root = [] {
    char tmpl[] = "/tmp/satfront_cli_XXXXXX";
    char* made = mkdtemp(tmpl);
    REQUIRE(made != nullptr);
    return fs::path(made);
  }();
  return root;
}

fs::path fresh_dir(const std::string& name) {
  fs::path dir = scratch_root() / name;
  fs::create_directories(dir);
  return dir;
}

// Runs the binary through the shell; args must already be shell-safe.
RunResult run_cli(const std::string& args, const fs::path& workdir,
                  const std::string& env_prefix = "") {
  fs::path out_file = workdir / "_stdout";
  fs::path err_file = workdir / "_stderr";
  std::string cmd = env_prefix + " \"" SATFRONT_CLI_PATH "\" " + args + " > " +
                    out_file.string() + " 2> " + err_file.string();
  int raw = std::system(cmd.c_str());
  RunResult res;
  if (WIFEXITED(raw)) res.exit_code = WEXITSTATUS(raw);
  res.out = slurp(out_file);
  res.err = slurp(err_file);
  return res;
}

}  // namespace

TEST_CASE("speed command writes and echoes the result") {
  fs::path dir = fresh_dir("speed");
  auto res = run_cli("--out-dir " + dir.string() +
                         " speed --kind bistable --eps 0.05 --tol 1e-6",
                     dir);
  CHECK(res.exit_code == 0);
  CHECK(res.out.find("\"kind\":\"bistable_star\"") != std::string::npos);
  CHECK(res.out.find("\"regime\":\"regular_front\"") != std::string::npos);
  fs::path written = dir / "speed_bistable_eps0.05.json";
  REQUIRE(fs::exists(written));
  CHECK(slurp(written) == res.out);

  auto mono = run_cli(
      "--out-dir " + dir.string() + " speed --kind monostable --eps 0.01", dir);
  CHECK(mono.exit_code == 0);
  CHECK(mono.out.find("\"monostable_plus\"") != std::string::npos);
  // closed form 2 sqrt(0.24 * 0.01) = 0.09797...
  CHECK(mono.out.find("0.0979795") != std::string::npos);
  CHECK(fs::exists(dir / "speed_monostable_eps0.01.json"));
}

TEST_CASE("front command emits csv plus sidecar") {
  fs::path dir = fresh_dir("front");
  auto res = run_cli(
      "--out-dir " + dir.string() + " front --eps 0.01 --c 0.2", dir);
  CHECK(res.exit_code == 0);
  fs::path csv = dir / "front_monostable_eps0.01.csv";
  fs::path side = dir / "front_monostable_eps0.01.json";
  REQUIRE(fs::exists(csv));
  REQUIRE(fs::exists(side));
  std::string body = slurp(csv);
  CHECK(body.rfind("z,v,piece_index,monotonicity\n", 0) == 0);
  std::string meta = slurp(side);
  CHECK(meta.find("\"kind\":\"regular_front\"") != std::string::npos);
  CHECK(meta.find("\"residual\"") != std::string::npos);
  CHECK(meta.find("\"residual\":null") == std::string::npos);
}

TEST_CASE("repeated runs produce identical bytes") {
  fs::path d1 = fresh_dir("det1");
  fs::path d2 = fresh_dir("det2");
  std::string args = " front --eps 0.01 --c 0.2";
  CHECK(run_cli("--out-dir " + d1.string() + args, d1).exit_code == 0);
  CHECK(run_cli("--out-dir " + d2.string() + args, d2).exit_code == 0);
  CHECK(slurp(d1 / "front_monostable_eps0.01.csv") ==
        slurp(d2 / "front_monostable_eps0.01.csv"));
  CHECK(slurp(d1 / "front_monostable_eps0.01.json") ==
        slurp(d2 / "front_monostable_eps0.01.json"));
}

TEST_CASE("steady command handles the jump profile") {
  fs::path dir = fresh_dir("steady");
  auto res = run_cli("--out-dir " + dir.string() + " steady --eps 0.005", dir);
  CHECK(res.exit_code == 0);
  std::string meta = slurp(dir / "steady_eps0.005.json");
  CHECK(meta.find("\"discontinuous_steady\"") != std::string::npos);
  CHECK(meta.find("\"jump\":{") != std::string::npos);
  CHECK(meta.find("\"residual\":null") != std::string::npos);
}

TEST_CASE("below the threshold the bistable front is a regime error") {
  fs::path dir = fresh_dir("regime");
  auto res = run_cli(
      "--out-dir " + dir.string() + " front --eps 0.005 --critical bistable",
      dir);
  CHECK(res.exit_code == 8);
  CHECK(res.err.rfind("{\"error\":{\"code\":\"regime\"", 0) == 0);
  CHECK(res.err.find("\"message\":") != std::string::npos);
  CHECK(res.out.empty());
}

TEST_CASE("malformed invocations exit with a config error") {
  fs::path dir = fresh_dir("badflag");
  auto res = run_cli(
      "--out-dir " + dir.string() + " speed --kind quartic --eps 0.01", dir);
  CHECK(res.exit_code == 10);
  CHECK(res.err.rfind("{\"error\":{\"code\":\"config\"", 0) == 0);

  auto none = run_cli("--out-dir " + dir.string(), dir);
  CHECK(none.exit_code == 10);

  auto grid = run_cli("--out-dir " + dir.string() +
                          " sweep --metric step --eps-grid nonsense",
                      dir);
  CHECK(grid.exit_code == 10);
  CHECK(grid.err.find("\"config\"") != std::string::npos);
}

TEST_CASE("shoot command dumps the raw trajectory") {
  fs::path dir = fresh_dir("shoot");
  auto res = run_cli("--out-dir " + dir.string() +
                         " shoot --eps 0.01 --c 0.2 --anchor 1 --stop 0.4 "
                         "--backward",
                     dir);
  CHECK(res.exit_code == 0);
  std::string csv = slurp(dir / "shoot_eps0.01_c0.2_bwd.csv");
  CHECK(csv.rfind("v,y\n", 0) == 0);
  std::string meta = slurp(dir / "shoot_eps0.01_c0.2_bwd.json");
  CHECK(meta.find("\"backward\"") != std::string::npos);
}

TEST_CASE("fixed-speed sweep writes the report pair") {
  fs::path dir = fresh_dir("sweepfixed");
  auto res = run_cli("--out-dir " + dir.string() +
                         " sweep --metric fixed --c 0.2 --eps 0.04 --eps 0.02",
                     dir);
  CHECK(res.exit_code == 0);
  std::string csv = slurp(dir / "sweep_fixed_c0.2.csv");
  CHECK(csv.rfind("eps,value\n", 0) == 0);
  // header + one line per eps
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
  std::string hdr = slurp(dir / "sweep_fixed_c0.2.json");
  CHECK(hdr.find("\"metric\":\"fixed\"") != std::string::npos);
  CHECK(hdr.find("\"eps\":[0.04,0.02]") != std::string::npos);
}

TEST_CASE("step sweep bundles the per-eps profiles") {
  fs::path dir = fresh_dir("sweepstep");
  auto res = run_cli("--out-dir " + dir.string() +
                         " sweep --metric step --which bistable --eps 0.01 "
                         "--eps 0.005",
                     dir);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "sweep_step_bistable.csv"));
  CHECK(fs::exists(dir / "sweep_step_bistable.json"));
  // one profile pair per eps; the sub-threshold one falls back to the steady
  CHECK(fs::exists(dir / "sweep_step_bistable_eps0.01.csv"));
  CHECK(fs::exists(dir / "sweep_step_bistable_eps0.005.csv"));
  std::string sub = slurp(dir / "sweep_step_bistable_eps0.005.json");
  CHECK(sub.find("\"discontinuous_steady\"") != std::string::npos);
}

TEST_CASE("config file swaps the model") {
  fs::path dir = fresh_dir("config");
  fs::path cfg = dir / "model.json";
  {
    std::ofstream out(cfg);
    out << "{\"reaction\":{\"type\":\"cubic\",\"a\":0.3}}";
  }
  auto res = run_cli("--config " + cfg.string() + " --out-dir " + dir.string() +
                         " speed --kind monostable --eps 0.01",
                     dir);
  CHECK(res.exit_code == 0);
  // 2 sqrt(f'(0.3) eps) with f'(0.3) = 0.3 * 0.7 = 0.21
  CHECK(res.out.find("0.0916515") != std::string::npos);

  auto missing = run_cli("--config " + (dir / "absent.json").string() +
                             " --out-dir " + dir.string() +
                             " speed --kind monostable --eps 0.01",
                         dir);
  CHECK(missing.exit_code == 10);
}

TEST_CASE("out dir can come from the environment") {
  fs::path dir = fresh_dir("envdir");
  auto res = run_cli("speed --kind monostable --eps 0.01", dir,
                     "SATFRONT_OUT_DIR=" + dir.string());
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "speed_monostable_eps0.01.json"));
}

TEST_CASE("plot flag adds figures") {
  fs::path dir = fresh_dir("plot");
  auto res = run_cli(
      "--out-dir " + dir.string() + " --plot inviscid --c 0.2", dir);
  CHECK(res.exit_code == 0);
  CHECK(fs::exists(dir / "inviscid_c0.2.csv"));
  CHECK(fs::exists(dir / "inviscid_c0.2.svg"));
  std::string svg = slurp(dir / "inviscid_c0.2.svg");
  CHECK(svg.find("<svg") != std::string::npos);
}

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "nfs/builders.hpp"
#include "nfs/commands.hpp"
#include "nfs/config.hpp"
#include "nfs/error.hpp"
#include "nfs/field_io.hpp"

using namespace nfs;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name) : path(fs::temp_directory_path() / ("nfs_cmd_" + name)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

RunConfig standard(const fs::path& out) {
  RunConfig cfg;
  cfg.dimension = 5;
  cfg.n = 8;
  cfg.half_width = 4.0 * std::numbers::pi;
  cfg.output_dir = out.string();
  cfg.contraction_trials = 5;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(const std::string& cmd, const RunConfig& cfg, std::string* out_text = nullptr) {
  std::ostringstream out, err;
  const int code = run_command(cmd, cfg, out, err);
  if (out_text) *out_text = out.str();
  return code;
}

}  // namespace

TEST_CASE("command list") {
  const auto& names = command_names();
  CHECK(names.size() == 7);
  CHECK(std::find(names.begin(), names.end(), "selfcheck") != names.end());
}

TEST_CASE("bounds command writes a report") {
  TempDir dir("bounds");
  std::string text;
  CHECK(run("bounds", standard(dir.path), &text) == 0);
  CHECK(fs::exists(dir.path / "bounds.txt"));
  CHECK(slurp(dir.path / "bounds.txt") == text);
  CHECK(text.find("[config]\n") != std::string::npos);
  CHECK(text.find("[bounds]\n") != std::string::npos);
  CHECK(text.find("epsilon_max = ") != std::string::npos);
  CHECK(text.find("problem.epsilon = auto (") != std::string::npos);
}

TEST_CASE("solve-linear and solve write fields and traces") {
  TempDir dir("solve");
  auto cfg = standard(dir.path);
  CHECK(run("solve-linear", cfg) == 0);
  auto u0 = read_nfs1(dir.path / "u0.nfs1");
  CHECK(u0.spec() == grid_from(cfg));
  std::string text;
  CHECK(run("solve", cfg, &text) == 0);
  CHECK(text.find("converged = true\n") != std::string::npos);
  CHECK(text.find("guarantee = certified\n") != std::string::npos);
  auto u = read_nfs1(dir.path / "u.nfs1");
  CHECK(norm_h4(u - u0) > 0.0);
  CHECK(norm_h4(u - u0) <= 1.0);
  CHECK(slurp(dir.path / "trace.csv").rfind("iter,u_h4,step_h4,ratio,residual\n", 0) == 0);
}

TEST_CASE("contraction CSV is byte-identical across runs") {
  TempDir a("contract_a");
  TempDir b("contract_b");
  CHECK(run("contraction", standard(a.path)) == 0);
  CHECK(run("contraction", standard(b.path)) == 0);
  const std::string first = slurp(a.path / "contraction.csv");
  CHECK(first == slurp(b.path / "contraction.csv"));
  CHECK(std::count(first.begin(), first.end(), '\n') == 6);
  auto other_seed = standard(b.path);
  other_seed.seed = 43;
  CHECK(run("contraction", other_seed) == 0);
  CHECK(first != slurp(b.path / "contraction.csv"));
  CHECK(slurp(a.path / "contraction_report.txt").find("verdict = true\n") != std::string::npos);
}

TEST_CASE("continuity and sequences commands") {
  TempDir dir("cont");
  auto cfg = standard(dir.path);
  std::string text;
  CHECK(run("continuity", cfg, &text) == 0);
  CHECK(text.find("verdict = true\n") != std::string::npos);
  CHECK(run("sequences", cfg, &text) == 0);
  CHECK(text.find("verdict = true\n") != std::string::npos);
  const std::string csv = slurp(dir.path / "sequences.csv");
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 9);
  cfg.sequence_amplitude = 0.0;
  CHECK(run("sequences", cfg, &text) == 0);
  CHECK(text.find("verdict = true\n") != std::string::npos);
}

TEST_CASE("exit codes for assumption violations and failures") {
  TempDir dir("codes");
  auto cfg = standard(dir.path);
  cfg.epsilon = 1e3;
  CHECK(run("continuity", cfg) == 3);
  CHECK(run("solve", cfg) != 0);
  auto wide = standard(dir.path);
  wide.kernel.sigma = 6.0;
  CHECK(run("bounds", wide) == 3);
  auto low_m = standard(dir.path);
  low_m.big_m = 1e-6;
  CHECK(run("bounds", low_m) == 3);
  auto d4 = standard(dir.path);
  d4.dimension = 4;
  CHECK(run("bounds", d4) == 2);
  CHECK(run("nonsense", standard(dir.path)) == 2);
}

TEST_CASE("selfcheck passes") {
  std::ostringstream out;
  CHECK(run_selfcheck(out) == 0);
  CHECK(out.str().find("FAIL") == std::string::npos);
}

#include <doctest.h>

#include <numbers>

#include "nfs/config.hpp"
#include "nfs/error.hpp"

using namespace nfs;

namespace {

const char* kMinimal = "grid.dimension = 5\ngrid.n = 8\ngrid.half_width = 12.5\n";

ErrorKind failure(const std::string& text) {
  try {
    (void)parse_config(text);
  } catch (const Error& e) {
    return e.kind();
  }
  FAIL("config unexpectedly accepted: " << text);
  return ErrorKind::Io;
}

}  // namespace

TEST_CASE("minimal config takes defaults") {
  auto c = parse_config(kMinimal);
  CHECK(c.dimension == 5);
  CHECK(c.n == 8);
  CHECK(c.half_width == 12.5);
  CHECK(!c.epsilon.has_value());
  CHECK(c.rho == 1.0);
  CHECK(c.mean_policy == MeanPolicy::Reject);
  CHECK(c.kernel.type == "gaussian");
  CHECK(c.source.type == "gaussian-diff");
  CHECK(c.source.centers.empty());
  CHECK(c.coeffs == std::vector<double>{1.0});
  CHECK(c.seed == 42);
  CHECK(c.contraction_trials == 50);
}

TEST_CASE("comments, whitespace and every key") {
  auto c = parse_config(std::string(kMinimal) +
                        "# comment\n\n"
                        "  problem.epsilon = 0.001   # trailing\n"
                        "problem.rho=0.5\n"
                        "problem.big_m = 10\n"
                        "problem.mean_policy = project\n"
                        "kernel.sigma = 0.8\n"
                        "kernel.amplitude = 2\n"
                        "source.type = gaussian\n"
                        "source.centers = 0,0,0,0,0\n"
                        "source.widths = 1.5\n"
                        "source.amplitude = 3\n"
                        "nonlinearity.coeffs = 1, -0.5, 0.25\n"
                        "solver.tol_fp = 1e-12\n"
                        "solver.max_iter = 50\n"
                        "solver.slack = 0.1\n"
                        "run.seed = 7\n"
                        "run.output_dir = out dir\n"
                        "contraction.trials = 5\n"
                        "continuity.coeffs = 1,0.2\n"
                        "sequences.count = 4\n"
                        "sequences.amplitude = 0\n");
  CHECK(*c.epsilon == 0.001);
  CHECK(c.rho == 0.5);
  CHECK(*c.big_m == 10.0);
  CHECK(c.mean_policy == MeanPolicy::Project);
  CHECK(c.kernel.sigma == 0.8);
  CHECK(c.source.type == "gaussian");
  REQUIRE(c.source.centers.size() == 1);
  CHECK(c.source.centers[0].size() == 5);
  CHECK(c.coeffs == std::vector<double>{1.0, -0.5, 0.25});
  CHECK(c.tol_fp == 1e-12);
  CHECK(c.max_iter == 50);
  CHECK(c.seed == 7);
  CHECK(c.output_dir == "out dir");
  CHECK(c.sequence_count == 4);
  CHECK(c.sequence_amplitude == 0.0);
}

TEST_CASE("config errors are classified") {
  CHECK(failure(std::string(kMinimal) + "grid.nn = 8\n") == ErrorKind::ConfigUnknownKey);
  CHECK(failure(std::string(kMinimal) + "solver.tolfp = 1\n") == ErrorKind::ConfigUnknownKey);
  CHECK(failure(std::string(kMinimal) + "no equals sign\n") == ErrorKind::ConfigSyntax);
  CHECK(failure(std::string(kMinimal) + "grid.n = 16\n") == ErrorKind::ConfigSyntax);
  CHECK(failure(std::string(kMinimal) + "problem.rho =\n") == ErrorKind::ConfigSyntax);
  CHECK(failure("grid.dimension = 5\ngrid.n = 8\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "problem.rho = 1.5\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "problem.rho = abc\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "problem.epsilon = -1\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "problem.mean_policy = maybe\n") == ErrorKind::ConfigInvalid);
  CHECK(failure("grid.dimension = 5\ngrid.n = 12\ngrid.half_width = 1\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "kernel.type = file\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "kernel.type = lorentz\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "source.type = gaussian\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "source.centers = 1,2;3,4\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "run.seed = -3\n") == ErrorKind::ConfigInvalid);
  CHECK(failure(std::string(kMinimal) + "solver.max_iter = 0\n") == ErrorKind::ConfigInvalid);
  CHECK_THROWS_AS(load_config("/nonexistent/run.cfg"), Error);
}

TEST_CASE("echo round-trips through the parser") {
  auto c = parse_config(std::string(kMinimal) + "problem.rho = 0.3\nnonlinearity.coeffs = 1,0.1\n");
  const std::string echo = echo_config(c);
  auto back = parse_config(echo);
  CHECK(echo_config(back) == echo);
  CHECK(echo.find("problem.epsilon = auto\n") != std::string::npos);
  CHECK(echo.find("problem.rho = 0.29999999999999999\n") != std::string::npos);
  CHECK(echo_config(c, 0.25).find("problem.epsilon = auto (0.25)\n") != std::string::npos);
  auto explicit_eps = parse_config(std::string(kMinimal) + "problem.epsilon = 0.5\n");
  CHECK(echo_config(explicit_eps, 0.25).find("problem.epsilon = 0.5\n") != std::string::npos);
}

#pragma once

// Line-oriented run configuration: `section.key = value`, `#` comments.
//
//   grid.dimension, grid.n, grid.half_width          (required)
//   problem.epsilon (number | auto), problem.rho, problem.big_m (number | auto), problem.mean_policy (reject | project)
//   kernel.type (gaussian | file), kernel.sigma, kernel.amplitude, kernel.path
//   source.type (gaussian-diff | gaussian | file), source.centers (x,y,..;x,y,.. | default),
//   source.widths (w1,w2), source.amplitude, source.path
//   nonlinearity.coeffs (a2,a3,...)
//   solver.tol_fp, solver.max_iter, solver.slack
//   run.seed, run.output_dir
//   contraction.trials
//   continuity.coeffs (second nonlinearity, a2,a3,...)
//   sequences.count, sequences.amplitude

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "nfs/linear_solver.hpp"

namespace nfs {

struct KernelConfig {
  std::string type = "gaussian";
  double sigma = 1.0;
  double amplitude = 1.0;
  std::string path;
};

struct SourceConfig {
  std::string type = "gaussian-diff";
  /// Empty means the default pair +-2 e_1.
  std::vector<std::vector<double>> centers;
  std::vector<double> widths = {1.0, 1.0};
  double amplitude = 1.0;
  std::string path;
};

struct RunConfig {
  int dimension = 5;
  int n = 8;
  double half_width = 0.0;
  /// nullopt means `auto`: epsilon_max, resolved after u0 is solved.
  std::optional<double> epsilon;
  double rho = 1.0;
  std::optional<double> big_m;
  MeanPolicy mean_policy = MeanPolicy::Reject;
  KernelConfig kernel;
  SourceConfig source;
  std::vector<double> coeffs = {1.0};
  std::vector<double> continuity_coeffs = {1.0, 0.1};
  double tol_fp = 1e-10;
  int max_iter = 200;
  double slack = 0.05;
  std::uint64_t seed = 42;
  std::string output_dir = ".";
  int contraction_trials = 50;
  int sequence_count = 8;
  double sequence_amplitude = 1.0;
};

/// Throws ConfigSyntax, ConfigUnknownKey or ConfigInvalid.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);

/// Checks the cross-field invariants; parse_config calls it.
void validate(const RunConfig& cfg);

/// Resolved configuration as `key = value` lines, in a fixed order.
/// `resolved_epsilon` replaces `auto` when known.
std::string echo_config(const RunConfig& cfg, std::optional<double> resolved_epsilon = std::nullopt);

}  // namespace nfs

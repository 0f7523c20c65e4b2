#pragma once

// Picard iteration for the perturbative part u_p of
//
//   [Delta - Delta^2] u + eps int K(x - y) g(u(y)) dy + f(x) = 0,   u = u0 + u_p,
//
// where u0 solves the linear problem with source f and u_p is the fixed
// point of t_g: v -> l^{-1}[eps K * g(u0 + v)], l = -Delta + Delta^2.
// The zero mode of eps K * g(.) is projected out before inversion; its
// value is recorded so the projection stays visible in reports.

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nfs/bounds.hpp"
#include "nfs/error.hpp"
#include "nfs/grid.hpp"
#include "nfs/linear_solver.hpp"
#include "nfs/nonlinearity.hpp"

namespace nfs {

/// Relative slack granted to every discrete check of a continuum inequality.
inline constexpr double kDefaultSlack = 0.05;

struct ProblemSpec {
  GridSpec grid;
  RealField kernel;
  RealField source;
  Nonlinearity g;
  double epsilon = 0.0;
  double rho = 1.0;
  IntervalI interval;
  /// Present whenever the dimension admits the closed-form constants (5..7).
  std::optional<BoundsSnapshot> bounds;
  double tol_fp = 1e-10;
  int max_iter = 200;
  double slack = kDefaultSlack;
  LinearSolveOptions source_opts;
};

/// True iff the constants are available and epsilon <= epsilon_max.
bool is_certified(const ProblemSpec& ps);

struct PrepareOptions {
  /// nullopt resolves epsilon to epsilon_max once u0 is known.
  std::optional<double> epsilon;
  /// Overrides M; must not be below the computed C2 norm.
  std::optional<double> big_m;
  double tol_fp = 1e-10;
  int max_iter = 200;
  double slack = kDefaultSlack;
  LinearSolveOptions source_opts;
};

struct ProblemSetup {
  ProblemSpec ps;
  RealField u0;
  C2Report c2;
  /// Mean removed from f when the source policy is Project.
  double source_removed_mean = 0.0;
};

/// Solves for u0 first, then derives I, M and the bounds snapshot, and
/// resolves epsilon. Requires 5 <= d <= 7. Throws TrivialField for a zero
/// kernel, TrivialSource for a zero source and NonconformingG when g
/// vanishes on I or M is below the C2 norm.
ProblemSetup prepare_problem(const RealField& kernel, const RealField& source, const Nonlinearity& g, double rho,
                             const PrepareOptions& options = {});

struct TgResult {
  RealField u;
  /// Quadrature mean of eps K * g(u0 + v) removed before inversion.
  double projected_mean = 0.0;
};

/// t_g v. When enforce_ball is set, throws OutsideBall unless
/// ||v||_{H^4} <= rho (1 + slack).
TgResult apply_tg_detailed(const RealField& v, const ProblemSpec& ps, const RealField& u0, bool enforce_ball = true);
RealField apply_tg(const RealField& v, const ProblemSpec& ps, const RealField& u0, bool enforce_ball = true);

/// ||[Delta - Delta^2] u + P(eps K * g(u)) + f||_2, with P removing the mean
/// (and f's mean removed too under the Project source policy).
double residual(const RealField& u, const ProblemSpec& ps);

/// ||[-Delta + Delta^2] u_p - P(eps K * g(u0 + u_p))||_2.
double perturbative_residual(const RealField& u_p, const RealField& u0, const ProblemSpec& ps);

struct IterationRow {
  int iter = 0;
  double u_h4 = 0.0;
  double step_h4 = 0.0;
  /// step_k / step_{k-1}; NaN on the first iteration.
  double ratio = 0.0;
  double residual = 0.0;
};

struct IterationTrace {
  std::vector<IterationRow> rows;
};

/// Columns: iter, u_h4, step_h4, ratio, residual.
std::string to_csv(const IterationTrace& trace);

enum class Guarantee { Certified, Uncertified };

struct SolveReport {
  RealField u0;
  RealField u_p;
  RealField u;
  IterationTrace trace;
  std::optional<BoundsSnapshot> bounds;
  bool converged = false;
  Guarantee guarantee = Guarantee::Uncertified;
  std::optional<ErrorKind> failure;
  double final_residual = 0.0;
  double projected_mean = 0.0;
};

/// Number of consecutive step increases treated as divergence.
inline constexpr int kDivergenceRun = 5;

/// Iterates v^{k+1} = t_g v^k from `initial` (zero by default) and records
/// the trace. Never throws on Diverged/NotConverged, nor when a later
/// iterate leaves I (IntervalExceeded); sets `failure` instead.
/// Certified runs keep every iterate inside the ball; uncertified runs skip
/// that check.
SolveReport run_fixed_point(const ProblemSpec& ps, const RealField& u0,
                            const std::optional<RealField>& initial = std::nullopt);

/// As run_fixed_point, but throws Diverged or NotConverged on failure.
SolveReport solve_fixed_point(const ProblemSpec& ps, const RealField& u0,
                              const std::optional<RealField>& initial = std::nullopt);

/// A random element of B_rho: Gaussian spectral coefficients damped by
/// (1 + |p|^4)^{-1}, symmetrized, transformed and rescaled to an H^4 norm
/// drawn uniformly from (0, rho].
RealField sample_ball(const GridSpec& grid, double rho, std::mt19937_64& rng);

struct ContractionStats {
  std::vector<double> ratios;
  double max_ratio = 0.0;
  double mean_ratio = 0.0;
  /// eps * sigma, or NaN when the constants are unavailable.
  double theoretical = 0.0;
  bool certified = false;
  int resampled = 0;
};

/// Samples `trials` pairs v1, v2 in B_rho and measures
/// ||t_g v1 - t_g v2||_{H^4} / ||v1 - v2||_{H^4}. Trial i draws from its own
/// engine seeded with (seed, i), so results do not depend on scheduling.
ContractionStats measure_contraction(const ProblemSpec& ps, const RealField& u0, int trials, std::uint64_t seed);

/// Columns: trial, ratio, bound.
std::string to_csv(const ContractionStats& stats);

struct SelfMapStats {
  std::vector<double> input_h4;
  std::vector<double> output_h4;
  double max_output = 0.0;
  double bound = 0.0;
};

/// ||t_g v||_{H^4} for `samples` draws v in B_rho; bound = rho (1 + slack).
SelfMapStats measure_self_map(const ProblemSpec& ps, const RealField& u0, int samples, std::uint64_t seed);

struct ContinuityReport {
  double epsilon = 0.0;
  double c2_distance = 0.0;
  double measured = 0.0;
  double bound = 0.0;
  bool verdict = false;
  SolveReport first;
  SolveReport second;
};

/// Solves with g1 and g2 (same u0, K, f, rho, epsilon and grid) and compares
/// ||u_1 - u_2||_{H^4} with the continuity bound built from ps1's constants.
/// Both problems must be certified.
ContinuityReport continuity_experiment(const ProblemSpec& ps1, const ProblemSpec& ps2, const RealField& u0);

struct EpsilonSweepRow {
  double epsilon = 0.0;
  double up_h4 = 0.0;
  int iterations = 0;
};

/// ||u_p||_{H^4} at each epsilon, all other data fixed.
std::vector<EpsilonSweepRow> epsilon_sweep(const ProblemSpec& ps, const RealField& u0,
                                           const std::vector<double>& epsilons);

}  // namespace nfs

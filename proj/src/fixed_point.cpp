#include "nfs/fixed_point.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nfs/csv.hpp"

namespace nfs {

namespace {

constexpr double kDegeneratePair = 1e-14;
constexpr int kMaxResample = 100;

double two_pi_power(int d, double exponent) { return std::pow(2.0 * std::numbers::pi, exponent * d); }

// Spectrum of eps K * h with the zero mode removed; returns the removed mean.
SpectralField projected_convolution(const RealField& kernel, const RealField& h, double epsilon,
                                    double& removed_mean) {
  const GridSpec& spec = kernel.spec();
  SpectralField C = forward_transform(kernel);
  const SpectralField H = forward_transform(h);
  const double factor = epsilon * two_pi_power(spec.dimension(), 0.5);
  for (std::size_t i = 0; i < C.size(); ++i) C[i] *= factor * H[i];
  // mean = (2L)^{-d} (2 pi)^{d/2} coeff(0)
  removed_mean = C[0].real() * two_pi_power(spec.dimension(), 0.5) /
                 std::pow(2.0 * spec.half_width(), spec.dimension());
  C[0] = Complex(0.0, 0.0);
  return C;
}

RealField pointwise(const Nonlinearity& g, const RealField& u) {
  std::vector<double> out(u.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = g.value(u[i]);
  return RealField(u.spec(), std::move(out), FieldRole::Composition);
}

void check_ball(const RealField& v, const ProblemSpec& ps) {
  const double norm = norm_h4(v);
  if (norm > ps.rho * (1.0 + ps.slack)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "||v||_H4 = " << norm << " exceeds rho (1 + slack) = " << ps.rho * (1.0 + ps.slack);
    throw Error(ErrorKind::OutsideBall, msg.str());
  }
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

bool is_certified(const ProblemSpec& ps) { return ps.bounds.has_value() && ps.epsilon <= ps.bounds->epsilon_max; }

ProblemSetup prepare_problem(const RealField& kernel, const RealField& source, const Nonlinearity& g, double rho,
                             const PrepareOptions& options) {
  const GridSpec& grid = source.spec();
  const int d = grid.dimension();
  if (d < 5 || d > 7) throw Error(ErrorKind::BadDimension, "contraction constants need 5 <= d <= 7");
  if (!(kernel.spec() == grid)) throw Error(ErrorKind::GridMismatch, "kernel and source grids differ");
  if (!(rho > 0.0) || rho > 1.0) throw Error(ErrorKind::NonPositiveInput, "rho must lie in (0, 1]");
  if (norm_l2(kernel) == 0.0) throw Error(ErrorKind::TrivialField, "kernel vanishes identically");

  const LinearSolution linear = solve_linear_detailed(source, options.source_opts);
  const double u0_h4 = norm_h4(linear.u);
  const double c_e = embedding_constant(d);
  const IntervalI interval = build_interval(u0_h4, c_e);
  C2Report c2 = c2_norm(g, interval);
  if (c2.c2_norm == 0.0) throw Error(ErrorKind::NonconformingG, "g vanishes identically on I");
  if (options.big_m) {
    if (!check_dm_membership(c2, *options.big_m))
      throw Error(ErrorKind::NonconformingG, "M is below ||g||_C2(I) = " + std::to_string(c2.c2_norm));
    c2.big_m = *options.big_m;
  }
  const BoundsSnapshot snapshot =
      make_bounds_snapshot(d, rho, c2.big_m, u0_h4, norm_l1(kernel), norm_l2(kernel));
  const double epsilon = options.epsilon.value_or(snapshot.epsilon_max);
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon))
    throw Error(ErrorKind::NonPositiveInput, "epsilon must be nonnegative");

  RealField k = kernel;
  k.set_role(FieldRole::Kernel);
  RealField f = source;
  f.set_role(FieldRole::Source);
  ProblemSpec ps{grid,   std::move(k),       std::move(f),   g,
                 epsilon, rho,               interval,       snapshot,
                 options.tol_fp, options.max_iter, options.slack, options.source_opts};
  return {std::move(ps), linear.u, c2, linear.removed_mean};
}

TgResult apply_tg_detailed(const RealField& v, const ProblemSpec& ps, const RealField& u0, bool enforce_ball) {
  if (!(v.spec() == ps.grid) || !(u0.spec() == ps.grid))
    throw Error(ErrorKind::GridMismatch, "apply_tg: field grid differs from problem grid");
  if (enforce_ball) check_ball(v, ps);
  if (ps.epsilon == 0.0) return {RealField(ps.grid, FieldRole::Iterate), 0.0};
  const RealField G = compose(ps.g, u0, v, ps.interval);
  double removed = 0.0;
  SpectralField C = projected_convolution(ps.kernel, G, ps.epsilon, removed);
  return {inverse_transform(invert_l_symbol(std::move(C)), FieldRole::Iterate), removed};
}

RealField apply_tg(const RealField& v, const ProblemSpec& ps, const RealField& u0, bool enforce_ball) {
  return apply_tg_detailed(v, ps, u0, enforce_ball).u;
}

double residual(const RealField& u, const ProblemSpec& ps) {
  const GridSpec& spec = ps.grid;
  double removed = 0.0;
  SpectralField R = projected_convolution(ps.kernel, pointwise(ps.g, u), ps.epsilon, removed);
  const SpectralField U = forward_transform(u);
  const SpectralField F = forward_transform(ps.source);
  for (std::size_t i = 0; i < R.size(); ++i)
    R[i] += F[i] - symbol_value(Symbol::LSymbol, spec.frequency_norm_squared(i)) * U[i];
  if (ps.source_opts.mean_policy == MeanPolicy::Project) R[0] -= F[0];
  return norm_l2(R);
}

double perturbative_residual(const RealField& u_p, const RealField& u0, const ProblemSpec& ps) {
  const GridSpec& spec = ps.grid;
  double removed = 0.0;
  SpectralField R = projected_convolution(ps.kernel, pointwise(ps.g, u0 + u_p), ps.epsilon, removed);
  const SpectralField U = forward_transform(u_p);
  for (std::size_t i = 0; i < R.size(); ++i)
    R[i] = symbol_value(Symbol::LSymbol, spec.frequency_norm_squared(i)) * U[i] - R[i];
  return norm_l2(R);
}

std::string to_csv(const IterationTrace& trace) {
  std::ostringstream out;
  out << "iter,u_h4,step_h4,ratio,residual\n";
  for (const IterationRow& r : trace.rows)
    out << r.iter << ',' << csv_number(r.u_h4) << ',' << csv_number(r.step_h4) << ',' << csv_number(r.ratio) << ','
        << csv_number(r.residual) << '\n';
  return out.str();
}

SolveReport run_fixed_point(const ProblemSpec& ps, const RealField& u0, const std::optional<RealField>& initial) {
  const bool certified = is_certified(ps);
  RealField v = initial.value_or(RealField(ps.grid, FieldRole::Iterate));
  SolveReport report{u0, v, u0, {}, ps.bounds, false,
                     certified ? Guarantee::Certified : Guarantee::Uncertified, std::nullopt, 0.0, 0.0};
  double previous_step = 0.0;
  int growth_run = 0;
  for (int k = 1; k <= ps.max_iter; ++k) {
    std::optional<TgResult> attempt;
    try {
      attempt = apply_tg_detailed(v, ps, u0, certified);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::IntervalExceeded || k == 1) throw;
      report.failure = ErrorKind::IntervalExceeded;
      break;
    }
    TgResult next = std::move(*attempt);
    const double step = norm_h4(next.u - v);
    const double up_h4 = norm_h4(next.u);
    IterationRow row;
    row.iter = k;
    row.u_h4 = up_h4;
    row.step_h4 = step;
    row.ratio = (k > 1 && previous_step > 0.0) ? step / previous_step : std::numeric_limits<double>::quiet_NaN();
    row.residual = residual(u0 + next.u, ps);
    report.trace.rows.push_back(row);
    report.projected_mean = next.projected_mean;

    growth_run = (k > 1 && step > previous_step) ? growth_run + 1 : 0;
    v = std::move(next.u);
    previous_step = step;
    if (step <= ps.tol_fp * std::max(1.0, up_h4)) {
      report.converged = true;
      break;
    }
    if (growth_run >= kDivergenceRun) {
      report.failure = ErrorKind::Diverged;
      break;
    }
  }
  if (!report.converged && !report.failure) report.failure = ErrorKind::NotConverged;
  v.set_role(FieldRole::Iterate);
  report.u_p = v;
  report.u = u0 + v;
  report.u.set_role(FieldRole::Solution);
  report.final_residual = report.trace.rows.empty() ? residual(report.u, ps) : report.trace.rows.back().residual;
  return report;
}

SolveReport solve_fixed_point(const ProblemSpec& ps, const RealField& u0, const std::optional<RealField>& initial) {
  SolveReport report = run_fixed_point(ps, u0, initial);
  if (report.failure) {
    const IterationRow& last = report.trace.rows.back();
    std::ostringstream msg;
    msg.precision(6);
    msg << "after " << last.iter << " iterations, last step " << last.step_h4;
    throw Error(*report.failure, msg.str());
  }
  return report;
}

RealField sample_ball(const GridSpec& grid, double rho, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  for (int attempt = 0; attempt < kMaxResample; ++attempt) {
    SpectralField raw(grid);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const double p2 = grid.frequency_norm_squared(i);
      const double damping = 1.0 / (1.0 + p2 * p2);
      const double re = normal(rng);
      const double im = normal(rng);
      raw[i] = damping * Complex(re, im);
    }
    SpectralField sym(grid);
    for (std::size_t i = 0; i < raw.size(); ++i) sym[i] = 0.5 * (raw[i] + std::conj(raw[grid.negated(i)]));
    RealField v = inverse_transform(sym, FieldRole::Iterate);
    const double norm = norm_h4(v);
    if (norm == 0.0) continue;
    const double target = rho * (1.0 - uniform(rng));
    v *= target / norm;
    return v;
  }
  throw Error(ErrorKind::InvalidArgument, "could not draw a nonzero ball sample");
}

ContractionStats measure_contraction(const ProblemSpec& ps, const RealField& u0, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorKind::InvalidArgument, "trials must be >= 1");
  ContractionStats stats;
  stats.certified = is_certified(ps);
  stats.theoretical = ps.bounds ? ps.epsilon * ps.bounds->sigma : std::numeric_limits<double>::quiet_NaN();
  double sum = 0.0;
  for (int t = 0; t < trials; ++t) {
    std::mt19937_64 rng = trial_engine(seed, static_cast<std::uint64_t>(t));
    for (int attempt = 0;; ++attempt) {
      const RealField v1 = sample_ball(ps.grid, ps.rho, rng);
      const RealField v2 = sample_ball(ps.grid, ps.rho, rng);
      const double dv = norm_h4(v1 - v2);
      if (dv < kDegeneratePair) {
        ++stats.resampled;
        if (attempt >= kMaxResample) throw Error(ErrorKind::InvalidArgument, "degenerate pairs only");
        continue;
      }
      const double du = norm_h4(apply_tg(v1, ps, u0) - apply_tg(v2, ps, u0));
      const double r = du / dv;
      stats.ratios.push_back(r);
      stats.max_ratio = std::max(stats.max_ratio, r);
      sum += r;
      break;
    }
  }
  stats.mean_ratio = sum / trials;
  return stats;
}

std::string to_csv(const ContractionStats& stats) {
  std::ostringstream out;
  out << "trial,ratio,bound\n";
  for (std::size_t i = 0; i < stats.ratios.size(); ++i)
    out << (i + 1) << ',' << csv_number(stats.ratios[i]) << ',' << csv_number(stats.theoretical) << '\n';
  return out.str();
}

SelfMapStats measure_self_map(const ProblemSpec& ps, const RealField& u0, int samples, std::uint64_t seed) {
  if (samples < 1) throw Error(ErrorKind::InvalidArgument, "samples must be >= 1");
  SelfMapStats stats;
  stats.bound = ps.rho * (1.0 + ps.slack);
  for (int s = 0; s < samples; ++s) {
    std::mt19937_64 rng = trial_engine(seed, static_cast<std::uint64_t>(s));
    const RealField v = sample_ball(ps.grid, ps.rho, rng);
    const double out = norm_h4(apply_tg(v, ps, u0));
    stats.input_h4.push_back(norm_h4(v));
    stats.output_h4.push_back(out);
    stats.max_output = std::max(stats.max_output, out);
  }
  return stats;
}

ContinuityReport continuity_experiment(const ProblemSpec& ps1, const ProblemSpec& ps2, const RealField& u0) {
  if (!(ps1.grid == ps2.grid) || ps1.epsilon != ps2.epsilon || ps1.rho != ps2.rho)
    throw Error(ErrorKind::InvalidArgument, "continuity runs must share grid, epsilon and rho");
  if (!is_certified(ps1) || !is_certified(ps2))
    throw Error(ErrorKind::ContractionViolated, "continuity experiment needs epsilon <= min epsilon_max");
  SolveReport first = solve_fixed_point(ps1, u0);
  SolveReport second = solve_fixed_point(ps2, u0);
  const double distance = c2_distance(ps1.g, ps2.g, ps1.interval);
  const double measured = norm_h4(first.u - second.u);
  const double bound = continuity_bound(ps1.epsilon, *ps1.bounds, distance);
  const bool verdict = measured <= bound * (1.0 + ps1.slack);
  return {ps1.epsilon, distance, measured, bound, verdict, std::move(first), std::move(second)};
}

std::vector<EpsilonSweepRow> epsilon_sweep(const ProblemSpec& ps, const RealField& u0,
                                           const std::vector<double>& epsilons) {
  std::vector<EpsilonSweepRow> rows;
  for (double eps : epsilons) {
    ProblemSpec copy = ps;
    copy.epsilon = eps;
    const SolveReport report = solve_fixed_point(copy, u0);
    rows.push_back({eps, norm_h4(report.u_p), static_cast<int>(report.trace.rows.size())});
  }
  return rows;
}

}  // namespace nfs

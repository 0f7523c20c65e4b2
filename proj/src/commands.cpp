#include "nfs/commands.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <numbers>
#include <ostream>
#include <sstream>

#include "nfs/builders.hpp"
#include "nfs/csv.hpp"
#include "nfs/error.hpp"
#include "nfs/field_io.hpp"
#include "nfs/fixed_point.hpp"
#include "nfs/linear_solver.hpp"
#include "nfs/nonlinearity.hpp"

namespace nfs {

namespace {

namespace fs = std::filesystem;

PrepareOptions prepare_options(const RunConfig& cfg) {
  PrepareOptions o;
  o.epsilon = cfg.epsilon;
  o.big_m = cfg.big_m;
  o.tol_fp = cfg.tol_fp;
  o.max_iter = cfg.max_iter;
  o.slack = cfg.slack;
  o.source_opts.mean_policy = cfg.mean_policy;
  return o;
}

ProblemSetup setup(const RunConfig& cfg, const std::vector<double>& coeffs) {
  return prepare_problem(build_kernel(cfg), build_source(cfg), Nonlinearity::polynomial(coeffs), cfg.rho,
                         prepare_options(cfg));
}

std::string kv(const std::string& key, double value) { return key + " = " + csv_number(value) + "\n"; }

std::string header(const std::string& command, const RunConfig& cfg, std::optional<double> eps) {
  return "# nfs " + command + "\n[config]\n" + echo_config(cfg, eps);
}

std::string c2_section(const C2Report& c2, const IntervalI& interval) {
  return "[nonlinearity]\n" + kv("interval.lower", interval.lower) + kv("interval.upper", interval.upper) +
         kv("sup_g", c2.sup_g) + kv("sup_g1", c2.sup_g1) + kv("sup_g2", c2.sup_g2) + kv("c2_norm", c2.c2_norm) +
         kv("big_m", c2.big_m);
}

void write_text(const RunConfig& cfg, const std::string& name, const std::string& text) {
  write_file_atomically(fs::path(cfg.output_dir) / name, text);
}

int cmd_bounds(const RunConfig& cfg, std::ostream& out) {
  const ProblemSetup s = setup(cfg, cfg.coeffs);
  const BoundsSnapshot& b = *s.ps.bounds;
  std::string text = header("bounds", cfg, s.ps.epsilon) + "[bounds]\n" + format_bounds(b) +
                     kv("epsilon_max_times_sigma", b.epsilon_max * b.sigma) + c2_section(s.c2, s.ps.interval);
  write_text(cfg, "bounds.txt", text);
  out << text;
  return 0;
}

int cmd_solve_linear(const RunConfig& cfg, std::ostream& out) {
  LinearSolveOptions opts;
  opts.mean_policy = cfg.mean_policy;
  const RealField f = build_source(cfg);
  const LinearSolution sol = solve_linear_detailed(f, opts);
  const RealField& u = sol.u;
  const double op_residual = norm_l2(apply_operator(u, Symbol::LSymbol) - f + [&] {
    RealField shift(f.spec());
    for (double& v : shift.values()) v = sol.removed_mean;
    return shift;
  }());
  std::string text = header("solve-linear", cfg, std::nullopt) + "[result]\n" + kv("f_l1", norm_l1(f)) +
                     kv("f_l2", norm_l2(f)) + kv("removed_mean", sol.removed_mean) + kv("u0_l1", norm_l1(u)) +
                     kv("u0_l2", norm_l2(u)) + kv("u0_linf", norm_linf(u)) + kv("u0_h4", verify_h4(u)) +
                     kv("operator_residual_l2", op_residual);
  if (cfg.dimension < 5) text += "note = d < 5 is test-only, outside the range covered by the bounds\n";
  write_nfs1(fs::path(cfg.output_dir) / "u0.nfs1", u);
  write_text(cfg, "solve_linear.txt", text);
  out << text;
  return 0;
}

int cmd_solve(const RunConfig& cfg, std::ostream& out) {
  const ProblemSetup s = setup(cfg, cfg.coeffs);
  const SolveReport r = run_fixed_point(s.ps, s.u0);
  std::string text = header("solve", cfg, s.ps.epsilon) + "[bounds]\n" + format_bounds(*s.ps.bounds) +
                     c2_section(s.c2, s.ps.interval) + "[result]\n" + kv("epsilon", s.ps.epsilon) +
                     "guarantee = " + (r.guarantee == Guarantee::Certified ? "certified" : "uncertified") + "\n" +
                     "converged = " + (r.converged ? "true" : "false") + "\n" +
                     "iterations = " + std::to_string(r.trace.rows.size()) + "\n" + kv("u0_h4", norm_h4(r.u0)) +
                     kv("up_h4", norm_h4(r.u_p)) + kv("u_h4", norm_h4(r.u)) + kv("u_l2", norm_l2(r.u)) +
                     kv("residual", r.final_residual) + kv("projected_mean", r.projected_mean) +
                     kv("source_removed_mean", s.source_removed_mean);
  if (r.failure) text += "failure = " + std::string(to_string(*r.failure)) + "\n";
  write_text(cfg, "trace.csv", to_csv(r.trace));
  write_nfs1(fs::path(cfg.output_dir) / "u.nfs1", r.u);
  write_text(cfg, "solve_report.txt", text);
  out << text;
  return r.failure ? exit_code_for(*r.failure) : 0;
}

int cmd_contraction(const RunConfig& cfg, std::ostream& out) {
  const ProblemSetup s = setup(cfg, cfg.coeffs);
  const ContractionStats stats = measure_contraction(s.ps, s.u0, cfg.contraction_trials, cfg.seed);
  const double limit = stats.theoretical * (1.0 + s.ps.slack);
  const bool ok = stats.max_ratio <= limit;
  std::string text = header("contraction", cfg, s.ps.epsilon) + "[bounds]\n" + format_bounds(*s.ps.bounds) +
                     "[result]\n" + "guarantee = " + (stats.certified ? "certified" : "uncertified") + "\n" +
                     "trials = " + std::to_string(stats.ratios.size()) + "\n" + kv("max_ratio", stats.max_ratio) +
                     kv("mean_ratio", stats.mean_ratio) + kv("epsilon_sigma", stats.theoretical) +
                     kv("limit", limit) + "verdict = " + (ok ? "true" : "false") + "\n";
  write_text(cfg, "contraction.csv", to_csv(stats));
  write_text(cfg, "contraction_report.txt", text);
  out << text;
  return ok || !stats.certified ? 0 : 1;
}

int cmd_continuity(const RunConfig& cfg, std::ostream& out) {
  ProblemSetup a = setup(cfg, cfg.coeffs);
  ProblemSetup b = setup(cfg, cfg.continuity_coeffs);
  const double eps =
      cfg.epsilon.value_or(std::min(a.ps.bounds->epsilon_max, b.ps.bounds->epsilon_max));
  a.ps.epsilon = eps;
  b.ps.epsilon = eps;
  const ContinuityReport r = continuity_experiment(a.ps, b.ps, a.u0);
  std::string text = header("continuity", cfg, eps) + "[bounds.g1]\n" + format_bounds(*a.ps.bounds) +
                     "[bounds.g2]\n" + format_bounds(*b.ps.bounds) + "[result]\n" +
                     "g1 = " + describe(a.ps.g) + "\n" + "g2 = " + describe(b.ps.g) + "\n" + kv("epsilon", eps) +
                     kv("c2_distance", r.c2_distance) + kv("measured_h4", r.measured) + kv("bound", r.bound) +
                     kv("limit", r.bound * (1.0 + a.ps.slack)) +
                     "iterations.g1 = " + std::to_string(r.first.trace.rows.size()) + "\n" +
                     "iterations.g2 = " + std::to_string(r.second.trace.rows.size()) + "\n" +
                     "verdict = " + (r.verdict ? "true" : "false") + "\n";
  write_text(cfg, "continuity_report.txt", text);
  out << text;
  return r.verdict ? 0 : 1;
}

int cmd_sequences(const RunConfig& cfg, std::ostream& out) {
  LinearSolveOptions opts;
  opts.mean_policy = cfg.mean_policy;
  const SequenceReport r = sequence_experiment(build_source(cfg), build_sequence_perturbations(cfg), opts);
  std::string text = header("sequences", cfg, std::nullopt) + "[result]\n" +
                     "rows = " + std::to_string(r.rows.size()) + "\n" + "verdict = " + (r.verdict ? "true" : "false") +
                     "\n";
  write_text(cfg, "sequences.csv", to_csv(r));
  write_text(cfg, "sequences_report.txt", text);
  out << text;
  return r.verdict ? 0 : 1;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names = {"bounds",     "solve-linear", "solve",    "contraction",
                                                 "continuity", "sequences",    "selfcheck"};
  return names;
}

std::string format_bounds(const BoundsSnapshot& b) {
  return "d = " + std::to_string(b.d) + "\n" + kv("rho", b.rho) + kv("big_m", b.big_m) + kv("u0_h4", b.u0_h4) +
         kv("k_l1", b.k_l1) + kv("k_l2", b.k_l2) + kv("sphere_measure", b.sphere_measure) +
         kv("embedding_constant", b.embedding_constant) + kv("epsilon_max", b.epsilon_max) + kv("sigma", b.sigma);
}

int run_command(const std::string& command, const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  try {
    if (command == "selfcheck") return run_selfcheck(out);
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec) throw Error(ErrorKind::Io, "cannot create " + cfg.output_dir + ": " + ec.message());
    if (command == "bounds") return cmd_bounds(cfg, out);
    if (command == "solve-linear") return cmd_solve_linear(cfg, out);
    if (command == "solve") return cmd_solve(cfg, out);
    if (command == "contraction") return cmd_contraction(cfg, out);
    if (command == "continuity") return cmd_continuity(cfg, out);
    if (command == "sequences") return cmd_sequences(cfg, out);
    err << "unknown command '" << command << "'\n";
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e.kind());
  }
}

int run_selfcheck(std::ostream& out) {
  using Check = std::pair<std::string, std::function<bool()>>;
  constexpr double pi = std::numbers::pi;
  auto close = [](double a, double b, double tol) { return std::abs(a - b) <= tol * std::max(1.0, std::abs(b)); };

  const std::vector<Check> checks = {
      {"grid-spectral: constant field has a single zero mode",
       [&] {
         const GridSpec g(2, 8, 1.5);
         const RealField one = RealField::sample(g, [](auto) { return 1.0; });
         const SpectralField F = forward_transform(one);
         double rest = 0.0;
         for (std::size_t i = 1; i < F.size(); ++i) rest = std::max(rest, std::abs(F[i]));
         return close(F[0].real(), 9.0 / (2.0 * pi), 1e-12) && rest < 1e-12;
       }},
      {"grid-spectral: l-symbol scales cos(x1) by 2",
       [&] {
         const GridSpec g(3, 8, pi);
         const RealField f = RealField::sample(g, [](auto x) { return std::cos(x[0]); });
         const RealField lf = inverse_transform(apply_symbol(forward_transform(f), Symbol::LSymbol));
         return norm_linf(lf - 2.0 * f) < 1e-12;
       }},
      {"grid-spectral: H4 norm of cos(x1) in d = 5",
       [&] {
         const GridSpec g(5, 8, pi);
         const RealField f = RealField::sample(g, [](auto x) { return std::cos(x[0]); });
         return close(norm_h4(f), std::pow(2.0 * pi, 2.5), 1e-12);
       }},
      {"grid-spectral: delta kernel is the convolution identity",
       [&] {
         const GridSpec g(2, 8, 2.0);
         RealField delta(g);
         const int mid = g.n() / 2;
         const int idx[2] = {mid, mid};
         delta[g.ravel(idx)] = 1.0 / g.cell_volume();
         const RealField h = RealField::sample(g, [](auto x) { return std::exp(-x[0] * x[0] - 2.0 * x[1] * x[1]); });
         return norm_linf(convolve(delta, h) - h) < 1e-12;
       }},
      {"bounds: |S^2| = 2 pi", [&] { return close(sphere_measure(2), 2.0 * pi, 1e-14); }},
      {"bounds: alpha = 4, d = 5 gives R* = 1, phi = 5",
       [&] {
         const PhiResult r = minimize_phi(4.0, 5);
         return close(r.r_star, 1.0, 1e-14) && close(r.phi_min, 5.0, 1e-14);
       }},
      {"bounds: epsilon_max is linear in rho",
       [&] {
         return close(epsilon_max(1.0, 2.0, 1.0, 1.0, 1.0, 5), 2.0 * epsilon_max(0.5, 2.0, 1.0, 1.0, 1.0, 5), 1e-14);
       }},
      {"bounds: sigma is linear in M",
       [&] { return close(sigma(4.0, 1.0, 1.0, 1.0, 5), 2.0 * sigma(2.0, 1.0, 1.0, 1.0, 5), 1e-14); }},
      {"nonlinearity: ||z^2||_C2[-1,1] = 5",
       [&] { return close(c2_norm(Nonlinearity::polynomial({1.0}), {-1.0, 1.0}).c2_norm, 5.0, 1e-14); }},
      {"nonlinearity: ||z^3||_C2[-1,1] = 10",
       [&] { return close(c2_norm(Nonlinearity::polynomial({0.0, 1.0}), {-1.0, 1.0}).c2_norm, 10.0, 1e-14); }},
      {"nonlinearity: D_M is closed",
       [&] {
         const C2Report r = c2_norm(Nonlinearity::polynomial({1.0}), {-1.0, 1.0});
         return check_dm_membership(r, 5.0) && !check_dm_membership(r, 4.999);
       }},
      {"nonlinearity: interval from u0_h4 = 2, c_e = 0.5",
       [&] {
         const IntervalI i = build_interval(2.0, 0.5);
         return i.lower == -1.5 && i.upper == 1.5;
       }},
      {"nonlinearity: C2 distance of 0.1 z^3 on [-1,1] is 1",
       [&] {
         return close(c2_distance(Nonlinearity::polynomial({1.0}), Nonlinearity::polynomial({1.0, 0.1}), {-1.0, 1.0}),
                      1.0, 1e-14);
       }},
      {"linear-poisson: cos(x1) -> cos(x1) / 2",
       [&] {
         const GridSpec g(5, 8, pi);
         const RealField f = RealField::sample(g, [](auto x) { return std::cos(x[0]); });
         return norm_l2(solve_linear(f) - 0.5 * f) <= 1e-12 * norm_l2(0.5 * f);
       }},
      {"linear-poisson: sin(2 x1) -> sin(2 x1) / 20",
       [&] {
         const GridSpec g(5, 8, pi);
         const RealField f = RealField::sample(g, [](auto x) { return std::sin(2.0 * x[0]); });
         return norm_l2(solve_linear(f) - 0.05 * f) <= 1e-12 * norm_l2(0.05 * f);
       }},
      {"linear-poisson: zero perturbations give an all-ok sequence report",
       [&] {
         const GridSpec g(5, 8, pi);
         const RealField f = RealField::sample(g, [](auto x) { return std::cos(x[0]); });
         const SequenceReport r = sequence_experiment(f, {RealField(g), RealField(g)});
         return r.verdict && r.rows.size() == 2 && r.rows[0].du_h4 == 0.0;
       }},
      {"fixed-point: epsilon = 0 converges in one iteration to u0",
       [&] {
         RunConfig cfg = parse_config("grid.dimension = 5\ngrid.n = 8\ngrid.half_width = 12.566370614359172\n"
                                      "problem.epsilon = 0\n");
         const ProblemSetup s = setup(cfg, cfg.coeffs);
         const SolveReport r = solve_fixed_point(s.ps, s.u0);
         return r.converged && r.trace.rows.size() == 1 && norm_linf(r.u_p) == 0.0 &&
                norm_linf(r.u - s.u0) == 0.0;
       }},
      {"fixed-point: residual of u = 0 at epsilon = 0 is ||f||_2",
       [&] {
         RunConfig cfg = parse_config("grid.dimension = 5\ngrid.n = 8\ngrid.half_width = 12.566370614359172\n"
                                      "problem.epsilon = 0\n");
         const ProblemSetup s = setup(cfg, cfg.coeffs);
         return close(residual(RealField(s.ps.grid), s.ps), norm_l2(s.ps.source), 1e-12);
       }},
      {"cli-harness: rho = 1.5 is rejected",
       [&] {
         try {
           parse_config("grid.dimension = 5\ngrid.n = 8\ngrid.half_width = 12.566\nproblem.rho = 1.5\n");
         } catch (const Error& e) {
           return e.kind() == ErrorKind::ConfigInvalid;
         }
         return false;
       }},
  };

  int failures = 0;
  for (const auto& [name, check] : checks) {
    bool ok = false;
    std::string detail;
    try {
      ok = check();
    } catch (const std::exception& e) {
      detail = std::string(" (") + e.what() + ")";
    }
    if (!ok) ++failures;
    out << (ok ? "PASS " : "FAIL ") << name << detail << '\n';
  }
  out << (failures == 0 ? "selfcheck: all " + std::to_string(checks.size()) + " checks passed"
                        : "selfcheck: " + std::to_string(failures) + " FAILED")
      << '\n';
  return failures == 0 ? 0 : 1;
}

}  // namespace nfs

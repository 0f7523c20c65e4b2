#include "nfs/linear_solver.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "nfs/bounds.hpp"
#include "nfs/csv.hpp"
#include "nfs/error.hpp"

namespace nfs {

SpectralField invert_l_symbol(SpectralField F) {
  const GridSpec& spec = F.spec();
  for (std::size_t i = 0; i < F.size(); ++i) {
    const double s = symbol_value(Symbol::LSymbol, spec.frequency_norm_squared(i));
    F[i] = s > 0.0 ? F[i] / s : Complex(0.0, 0.0);
  }
  return F;
}

LinearSolution solve_linear_detailed(const RealField& f, const LinearSolveOptions& opts) {
  if (!(opts.zero_mode_tol >= 0.0)) throw Error(ErrorKind::InvalidArgument, "zero_mode_tol must be >= 0");
  const double f_l2 = norm_l2(f);
  if (f_l2 == 0.0) throw Error(ErrorKind::TrivialSource, "source vanishes identically");
  const SpectralField F = forward_transform(f);
  const double zero_mode = std::abs(F[0]);
  double removed = 0.0;
  if (opts.mean_policy == MeanPolicy::Reject) {
    if (zero_mode > opts.zero_mode_tol * f_l2) {
      std::ostringstream msg;
      msg << "|f^(0)| = " << zero_mode << " exceeds " << opts.zero_mode_tol << " * ||f||_2; "
          << "use a mean-free source or mean_policy = project";
      throw Error(ErrorKind::NonDecayingSource, msg.str());
    }
  } else {
    removed = mean(f);
  }
  return {inverse_transform(invert_l_symbol(F), FieldRole::Solution), removed};
}

RealField solve_linear(const RealField& f, const LinearSolveOptions& opts) {
  return solve_linear_detailed(f, opts).u;
}

RealField apply_operator(const RealField& u, Symbol symbol) {
  return inverse_transform(apply_symbol(forward_transform(u), symbol));
}

double verify_h4(const RealField& u) { return norm_h4(u); }

double sequence_majorant(double df_l1, double df_l2, int d) {
  if (d <= 4) throw Error(ErrorKind::BadDimension, "sequence majorant requires d >= 5");
  const double low = std::pow(2.0 * std::numbers::pi, -0.5 * d) * std::sqrt(sphere_measure(d) / (d - 4.0)) * df_l1;
  const double l2_part = 0.5 * df_l2 + low;
  return std::sqrt(df_l2 * df_l2 + l2_part * l2_part);
}

SequenceReport sequence_experiment(const RealField& f, const std::vector<RealField>& perturbations,
                                   const LinearSolveOptions& opts) {
  const int d = f.spec().dimension();
  if (d <= 4) throw Error(ErrorKind::BadDimension, "sequence experiment requires d >= 5");
  const RealField u = solve_linear(f, opts);
  SequenceReport report;
  int index = 0;
  for (const RealField& delta : perturbations) {
    ++index;
    if (!(delta.spec() == f.spec())) throw Error(ErrorKind::GridMismatch, "perturbation grid differs from source");
    const RealField un = solve_linear(f + delta, opts);
    SequenceRow row;
    row.index = index;
    row.df_l1 = norm_l1(delta);
    row.df_l2 = norm_l2(delta);
    row.du_h4 = norm_h4(un - u);
    row.majorant = sequence_majorant(row.df_l1, row.df_l2, d);
    row.ok = row.du_h4 <= row.majorant * (1.0 + kSequenceSlack);
    report.verdict = report.verdict && row.ok;
    report.rows.push_back(row);
  }
  return report;
}

std::string to_csv(const SequenceReport& report) {
  std::ostringstream out;
  out << "n,df_l1,df_l2,du_h4,majorant,ok\n";
  for (const SequenceRow& r : report.rows)
    out << r.index << ',' << csv_number(r.df_l1) << ',' << csv_number(r.df_l2) << ',' << csv_number(r.du_h4) << ','
        << csv_number(r.majorant) << ',' << (r.ok ? "true" : "false") << '\n';
  return out.str();
}

}  // namespace nfs
